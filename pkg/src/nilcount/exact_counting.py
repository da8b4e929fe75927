"""Closed forms, recurrences and exact probabilities.

Everything here is integer or :class:`fractions.Fraction` arithmetic; no
floating point is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, prod

from .errors import OutOfRange
from .finite_field import check_prime_power


def gl_order(r: int, q: int) -> int:
    """prod_{i<r} (q^r - q^i), the number of ordered bases of F_q^r."""
    return prod(q**r - q**i for i in range(r))


def injective_count(m: int, r: int, q: int) -> int:
    """prod_{i<r} (q^m - q^i): ordered r-tuples of independent vectors in F_q^m."""
    return prod(q**m - q**i for i in range(r))


def q_binomial(m: int, r: int, q: int) -> int:
    """Gaussian binomial [m r]_q, the number of r-dimensional subspaces of F_q^m."""
    if q < 2:
        raise OutOfRange(f"q={q} must be >= 2")
    if not 0 <= r <= m:
        raise OutOfRange(f"need 0 <= r <= m, got m={m}, r={r}")
    num, den = injective_count(m, r, q), gl_order(r, q)
    value, rem = divmod(num, den)
    assert rem == 0
    return value


def rank_maps_formula(q: int, m: int, n: int, r: int) -> int:
    """Number of rank-r linear maps F_q^m -> F_q^n."""
    check_prime_power(q)
    if not 0 <= r <= min(m, n):
        raise OutOfRange(f"rank {r} outside [0, {min(m, n)}]")
    return q_binomial(m, r, q) * q_binomial(n, r, q) * gl_order(r, q)


def dag_count_formula(n: int) -> int:
    """Labeled DAGs on n vertices via a_n = sum_k (-1)^(k-1) C(n,k) 2^(k(n-k)) a_(n-k)."""
    if n < 0:
        raise OutOfRange("n must be >= 0")
    return _dag_counts(n)[n]


@lru_cache(maxsize=None)
def _dag_counts(n: int) -> tuple[int, ...]:
    a = [1]
    for size in range(1, n + 1):
        a.append(sum((-1) ** (k - 1) * comb(size, k) * 2 ** (k * (size - k)) * a[size - k] for k in range(1, size + 1)))
    return tuple(a)


def eventually_constant_formula(m: int, n: int) -> int:
    if m < 1 or n < 1:
        raise OutOfRange("m and n must be >= 1")
    return m ** (n - 1) * n ** (m - 1) * (m + n - 1)


def cayley(m: int) -> int:
    """Labeled trees on m vertices; cayley(1) = cayley(2) = 1."""
    if m < 1:
        raise OutOfRange("m must be >= 1")
    return 1 if m <= 2 else m ** (m - 2)


def bipartite_spanning_trees(m: int, n: int) -> int:
    if m < 1 or n < 1:
        raise OutOfRange("m and n must be >= 1")
    return m ** (n - 1) * n ** (m - 1)


def trees_formulas(m: int, n: int) -> tuple[int, int]:
    return cayley(m), bipartite_spanning_trees(m, n)


def _check_dims(m: int, n: int) -> None:
    if m < 0 or n < 0:
        raise OutOfRange("dimensions must be >= 0")


def nilpairs_sum_formula(q: int, m: int, n: int) -> int:
    """Nilpotent pairs summed over the rank r of f: [m r][n r] q^(mn-r) |GL_r|."""
    check_prime_power(q)
    _check_dims(m, n)
    return sum(
        q_binomial(m, r, q) * q_binomial(n, r, q) * q ** (m * n - r) * gl_order(r, q)
        for r in range(min(m, n) + 1)
    )


def nilpairs_closed_formula(q: int, m: int, n: int) -> int:
    """q^(2mn-m-n) (q^m + q^n - 1); equal to 1 whenever m = 0 or n = 0."""
    check_prime_power(q)
    _check_dims(m, n)
    if m == 0 or n == 0:
        return 1
    return q ** (2 * m * n - m - n) * (q**m + q**n - 1)


def balanced_triple_formula(q: int, m: int, n: int, ell: int) -> int:
    """Nilpotent pairs together with a balanced vector of length ell."""
    check_prime_power(q)
    _check_dims(m, n)
    if not 0 <= ell <= min(m, n):
        raise OutOfRange(f"ell={ell} outside [0, {min(m, n)}]")
    return (
        injective_count(m, ell, q)
        * injective_count(n, ell, q)
        * q ** (ell * (m - ell))
        * q ** (ell * (n - ell))
        * nilpairs_closed_formula(q, m - ell, n - ell)
    )


# ---------------------------------------------------------------------------
# probabilities
# ---------------------------------------------------------------------------


def eventually_constant_probability(m: int, n: int) -> Fraction:
    return Fraction(m + n - 1, m * n)


def nilpotent_pair_probability(q: int, m: int, n: int) -> Fraction:
    """q^-m + q^-n - q^-(m+n)."""
    check_prime_power(q)
    _check_dims(m, n)
    return Fraction(1, q**m) + Fraction(1, q**n) - Fraction(1, q ** (m + n))


def balanced_given_nilpotent_probability(q: int, m: int, n: int) -> Fraction:
    """Chance that a uniform v in V is balanced for a uniform nilpotent pair."""
    check_prime_power(q)
    _check_dims(m, n)
    return Fraction(q**n, q**m + q**n - 1)


def boolean_nilpotent_probability(n: int) -> Fraction:
    return Fraction(dag_count_formula(n), 2 ** (n * n))


# ---------------------------------------------------------------------------
# limits, audited through exact residuals
# ---------------------------------------------------------------------------


@dataclass
class LimitAudit:
    q: int
    m: int
    n_max: int
    fixed_m_residuals: dict[int, Fraction] = field(default_factory=dict)
    diagonal_values: dict[int, Fraction] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def limit_audit(q: int, m: int, n_max: int) -> LimitAudit:
    """Check the exact residual identities behind both limit statements.

    For fixed m: prob(q,m,n) - q^-m == q^-n (1 - q^-m), strictly positive and
    shrinking by exactly 1/q per step when m >= 1 (identically 0 when m = 0).
    On the diagonal: prob(q,n,n) == 2 q^-n - q^-2n, strictly decreasing.
    Each probability is also recomputed from the rank-sum count.
    """
    check_prime_power(q)
    if n_max < m:
        raise OutOfRange("n_max must be >= m")
    audit = LimitAudit(q, m, n_max)
    base = Fraction(1, q**m)
    prev_res = prev_diag = None
    for n in range(m, n_max + 1):
        prob = nilpotent_pair_probability(q, m, n)
        from_sum = Fraction(nilpairs_sum_formula(q, m, n), q ** (2 * m * n))
        if prob != from_sum:
            audit.failures.append(f"(q,m,n)=({q},{m},{n}): closed {prob} != sum {from_sum}")
        res = prob - base
        expected = Fraction(1, q**n) * (1 - base)
        if res != expected:
            audit.failures.append(f"(q,m,n)=({q},{m},{n}): residual {res} != {expected}")
        if m >= 1 and res <= 0:
            audit.failures.append(f"(q,m,n)=({q},{m},{n}): residual {res} not positive")
        if prev_res is not None and m >= 1 and res != prev_res / q:
            audit.failures.append(f"(q,m,n)=({q},{m},{n}): residual ratio {res / prev_res} != 1/{q}")
        audit.fixed_m_residuals[n] = res

        diag = nilpotent_pair_probability(q, n, n)
        expected = 2 * Fraction(1, q**n) - Fraction(1, q ** (2 * n))
        if diag != expected:
            audit.failures.append(f"(q,n,n)=({q},{n},{n}): value {diag} != {expected}")
        if prev_diag is not None and not diag < prev_diag:
            audit.failures.append(f"(q,n,n)=({q},{n},{n}): {diag} not below {prev_diag}")
        audit.diagonal_values[n] = diag
        prev_res, prev_diag = res, diag
    return audit
