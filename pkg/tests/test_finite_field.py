import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nilcount.errors import DivisionByZero, NotAPrimePower, TooLarge
from nilcount.finite_field import least_irreducible, make_field, prime_power_decomposition

PRIME_POWERS_TO_64 = [
    2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 41, 43, 47, 49, 53, 59, 61, 64
]


def _is_prime_power_naive(q):
    ps = [p for p in range(2, q + 1) if q % p == 0 and all(p % d for d in range(2, p))]
    return len(ps) == 1


def test_prime_power_list_is_complete():
    assert PRIME_POWERS_TO_64 == [q for q in range(2, 65) if _is_prime_power_naive(q)]


def test_spec_examples():
    f2 = make_field(2)
    assert list(f2.elements()) == [0, 1] and f2.add(1, 1) == 0
    f4 = make_field(4)
    assert all(f4.add(x, x) == 0 for x in f4.elements())
    assert all(f4.power(x, 3) == 1 for x in range(1, 4))
    assert make_field(5).add(3, 4) == 2
    assert make_field(3).inv(2) == 2
    assert f2.mul(1, 1) == 1


@pytest.mark.parametrize("q", [0, 1, 6, 10, 12, 36, 100])
def test_not_prime_power(q):
    with pytest.raises(NotAPrimePower):
        make_field(q)


def test_too_large():
    with pytest.raises(TooLarge):
        make_field(2**17)
    assert make_field(2**16).q == 2**16


def test_inverse_of_zero():
    with pytest.raises(DivisionByZero):
        make_field(9).inv(0)


def test_decomposition():
    assert prime_power_decomposition(64) == (2, 6)
    assert prime_power_decomposition(49) == (7, 2)
    assert prime_power_decomposition(13) == (13, 1)


def test_least_irreducible_choices():
    # x^2+x+1 is the only quadratic irreducible over F_2; x^3+x+1 precedes x^3+x^2+1
    assert least_irreducible(2, 2) == (1, 1, 1)
    assert least_irreducible(2, 3) == (1, 1, 0, 1)
    # over F_3, x^2+1 has no root and nothing smaller qualifies
    assert least_irreducible(3, 2) == (1, 0, 1)


def test_deterministic():
    a, b = make_field(27), make_field(27)
    assert [a.mul(x, y) for x in range(27) for y in range(27)] == [b.mul(x, y) for x in range(27) for y in range(27)]


@pytest.mark.parametrize("q", PRIME_POWERS_TO_64)
def test_field_axioms_exhaustive(q):
    ctx = make_field(q)
    add, mul = (np.asarray(t) for t in ctx.tables())
    e = np.arange(q)
    # closure, identities, commutativity
    assert add.min() >= 0 and add.max() < q and mul.min() >= 0 and mul.max() < q
    assert (add[0] == e).all() and (mul[1] == e).all()
    assert (add == add.T).all() and (mul == mul.T).all()
    # associativity and distributivity over all triples
    assert (add[add[:, :, None], e[None, None, :]] == add[e[:, None, None], add[None, :, :]]).all()
    assert (mul[mul[:, :, None], e[None, None, :]] == mul[e[:, None, None], mul[None, :, :]]).all()
    assert (mul[e[:, None, None], add[None, :, :]] == add[mul[:, :, None], mul[:, None, :]]).all()
    # inverses
    assert all((add[a] == 0).sum() == 1 for a in range(q))
    assert all((mul[a] == 1).sum() == 1 for a in range(1, q))
    # characteristic p: p copies of x sum to zero
    for x in range(q):
        acc = 0
        for _ in range(ctx.p):
            acc = add[acc, x]
        assert acc == 0


@pytest.mark.parametrize("q", PRIME_POWERS_TO_64)
def test_fermat_exhaustive(q):
    ctx = make_field(q)
    assert all(ctx.power(a, q - 1) == 1 for a in range(1, q))


@pytest.mark.parametrize("q", [8, 9, 25, 49])
def test_scalar_ops_match_tables(q):
    ctx = make_field(q)
    add, mul = ctx.tables()
    for a, b in itertools.product(range(q), repeat=2):
        assert ctx.add(a, b) == add[a, b] and ctx.mul(a, b) == mul[a, b]
        assert ctx.add(ctx.sub(a, b), b) == a
        if b:
            assert ctx.mul(ctx.div(a, b), b) == a


@given(st.sampled_from([2, 3, 4, 8, 9, 81, 125, 256, 343, 2048, 4096]), st.data())
def test_random_axioms_large_fields(q, data):
    ctx = make_field(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert ctx.mul(a, ctx.add(b, c)) == ctx.add(ctx.mul(a, b), ctx.mul(a, c))
    assert ctx.mul(ctx.mul(a, b), c) == ctx.mul(a, ctx.mul(b, c))
    assert ctx.add(a, ctx.neg(a)) == 0
    if a:
        assert ctx.mul(a, ctx.inv(a)) == 1
        assert ctx.power(a, q - 1) == 1
