import itertools
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from nilcount import exact_counting as ec
from nilcount.errors import NotAPrimePower, OutOfRange
from nilcount.finite_field import make_field
from nilcount.matrix_gfq import rref


def subspace_count_bruteforce(q, m, r):
    """Distinct reduced row-echelon forms of r independent vectors in F_q^m."""
    ctx = make_field(q)
    seen = set()
    for vecs in itertools.combinations(itertools.product(range(q), repeat=m), r):
        rows, pivots = rref(ctx, vecs, m)
        if len(pivots) == r:
            seen.add(tuple(map(tuple, rows[:r])))
    return len(seen)


def dag_count_bruteforce(n):
    """Labeled DAGs: count edge subsets of the complete digraph with no cycle."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    total = 0
    for mask in range(1 << len(pairs)):
        succ = {i: [] for i in range(n)}
        indeg = [0] * n
        for b, (i, j) in enumerate(pairs):
            if mask >> b & 1:
                succ[i].append(j)
                indeg[j] += 1
        stack = [i for i in range(n) if indeg[i] == 0]
        removed = 0
        while stack:
            i = stack.pop()
            removed += 1
            for j in succ[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    stack.append(j)
        total += removed == n
    return total


def test_q_binomial_examples():
    assert ec.q_binomial(5, 0, 3) == 1
    assert ec.q_binomial(2, 1, 2) == 3
    assert ec.q_binomial(4, 2, 2) == 35 == subspace_count_bruteforce(2, 4, 2)
    with pytest.raises(OutOfRange):
        ec.q_binomial(2, 3, 2)


@pytest.mark.parametrize("q,m", [(2, 3), (2, 4), (3, 3), (4, 2)])
def test_q_binomial_counts_subspaces(q, m):
    for r in range(m + 1):
        assert ec.q_binomial(m, r, q) == subspace_count_bruteforce(q, m, r)


def test_q_binomial_symmetry():
    for q in (2, 3, 4, 5):
        for m in range(11):
            for r in range(m + 1):
                v = ec.q_binomial(m, r, q)
                assert isinstance(v, int) and v == ec.q_binomial(m, m - r, q)


def test_dag_sequence():
    assert [ec.dag_count_formula(n) for n in range(7)] == [1, 1, 3, 25, 543, 29281, 3781503]


def test_dag_recurrence_vs_graph_oracle():
    assert [dag_count_bruteforce(n) for n in range(5)] == [ec.dag_count_formula(n) for n in range(5)]


def test_eventually_constant_examples():
    assert ec.eventually_constant_formula(1, 1) == 1
    assert ec.eventually_constant_formula(2, 2) == 12
    assert ec.eventually_constant_formula(3, 3) == 405


def test_tree_formulas():
    assert ec.cayley(1) == ec.cayley(2) == 1
    assert ec.cayley(3) == 3 and ec.cayley(4) == 16
    assert ec.trees_formulas(2, 2) == (1, 4)
    assert ec.trees_formulas(3, 3) == (3, 81)


def test_nilpair_formula_examples():
    for q in (2, 3, 4):
        for n in range(6):
            assert ec.nilpairs_sum_formula(q, 0, n) == ec.nilpairs_closed_formula(q, 0, n) == 1
    assert ec.nilpairs_sum_formula(2, 1, 2) == 10
    assert ec.nilpairs_sum_formula(2, 2, 2) == 112
    assert ec.nilpairs_closed_formula(2, 1, 1) == 3
    assert ec.nilpairs_closed_formula(3, 1, 2) == 33


def test_small_m_forms():
    for q in (2, 3, 4, 5):
        for n in range(9):
            if n >= 1:
                assert ec.nilpairs_closed_formula(q, 1, n) == q ** (n - 1) * (q**n + q - 1)
                assert ec.nilpairs_closed_formula(q, 3, n) * q**3 == q ** (5 * n) * (q**n + q**3 - 1)


def test_length_examples():
    for q in (2, 3):
        for m in range(5):
            assert ec.balanced_triple_formula(q, m, 3, 0) == ec.nilpairs_closed_formula(q, m, 3)
            assert sum(ec.balanced_triple_formula(q, m, 2, ell) for ell in range(min(m, 2) + 1)) == q ** (4 * m)
    with pytest.raises(OutOfRange):
        ec.balanced_triple_formula(2, 1, 2, 2)


def test_sum_equals_closed_sweep():
    for q in (2, 3, 4, 5):
        for m in range(9):
            for n in range(9):
                assert ec.nilpairs_sum_formula(q, m, n) == ec.nilpairs_closed_formula(q, m, n)


def test_rank_partition():
    for q in (2, 3):
        for m in range(7):
            for n in range(7):
                assert sum(ec.rank_maps_formula(q, m, n, r) for r in range(min(m, n) + 1)) == q ** (m * n)


def test_length_partition():
    for q in (2, 3):
        for m in range(6):
            for n in range(6):
                total = sum(ec.balanced_triple_formula(q, m, n, ell) for ell in range(min(m, n) + 1))
                assert total == q ** (2 * m * n)


def test_probabilities():
    assert ec.eventually_constant_probability(2, 2) == Fraction(3, 4)
    assert ec.nilpotent_pair_probability(2, 1, 1) == Fraction(3, 4)
    assert ec.nilpotent_pair_probability(3, 0, 4) == 1
    assert ec.boolean_nilpotent_probability(2) == Fraction(3, 16)
    for q in (2, 3, 5):
        for m in range(1, 5):
            for n in range(1, 5):
                p = ec.nilpotent_pair_probability(q, m, n)
                assert p == Fraction(ec.nilpairs_closed_formula(q, m, n), q ** (2 * m * n))
                assert p == Fraction(1, q**m) + Fraction(1, q**n) - Fraction(1, q ** (m + n))
                assert ec.balanced_given_nilpotent_probability(q, m, n) == Fraction(q**n, q**m + q**n - 1)


def test_prime_power_validation():
    with pytest.raises(NotAPrimePower):
        ec.nilpairs_closed_formula(6, 1, 1)


def test_limit_audit_examples():
    audit = ec.limit_audit(2, 1, 20)
    assert audit.ok
    for n in range(1, 21):
        assert audit.fixed_m_residuals[n] == Fraction(1, 2**n) * Fraction(1, 2)
        assert audit.diagonal_values[n] == Fraction(2, 2**n) - Fraction(1, 4**n)
    for q in (2, 3):
        for m in range(4):
            assert ec.limit_audit(q, m, 30).ok
    with pytest.raises(OutOfRange):
        ec.limit_audit(2, 3, 2)


@given(st.sampled_from([2, 3, 4, 5, 7, 8, 9]), st.integers(0, 12), st.integers(0, 12))
def test_closed_form_symmetric_and_bounded(q, m, n):
    N = ec.nilpairs_closed_formula(q, m, n)
    assert N == ec.nilpairs_closed_formula(q, n, m)
    assert 0 < N <= q ** (2 * m * n)


@given(st.integers(1, 12), st.integers(0, 12), st.sampled_from([2, 3, 4, 5]))
def test_q_binomial_pascal(m, r, q):
    # [m r] = [m-1 r-1] + q^r [m-1 r]
    if r > m:
        return
    left = ec.q_binomial(m, r, q)
    right = (ec.q_binomial(m - 1, r - 1, q) if r >= 1 else 0) + (q**r * ec.q_binomial(m - 1, r, q) if r <= m - 1 else 0)
    assert left == right


@given(st.integers(0, 15), st.integers(0, 15))
def test_q_binomial_dominates_binomial(m, r):
    # [m r]_q is a polynomial in q with nonnegative coefficients summing to C(m, r)
    if r > m:
        return
    assert ec.q_binomial(m, r, 2) >= comb(m, r)
