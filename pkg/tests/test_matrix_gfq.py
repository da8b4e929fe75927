import itertools
import math

import pytest
from hypothesis import given, strategies as st

from nilcount.errors import NotNilpotentOrbit, NotNilpotentPair, NotSquare, ShapeMismatch
from nilcount.finite_field import make_field
from nilcount.matrix_gfq import (
    GfMatrix,
    LinearPair,
    complement_basis,
    cyclic_length,
    fitting_decompose,
    inverse,
    is_nilpotent,
    kernel_profile,
    mat_mul,
    nullspace,
    rank,
    span_basis,
)
from nilcount.nilpotent_pairs import all_linear_pairs, all_vectors

F2, F3 = make_field(2), make_field(3)


def all_square(ctx, s):
    for entries in itertools.product(range(ctx.q), repeat=s * s):
        yield GfMatrix.from_rows(ctx, [entries[i * s:(i + 1) * s] for i in range(s)], s)


def kernel_dim_bruteforce(A):
    """log_q of the number of vectors sent to zero."""
    zero = tuple([0] * A.rows)
    size = sum(1 for v in all_vectors(A.ctx.q, A.cols) if tuple(A.apply(v)) == zero)
    return round(math.log(size, A.ctx.q))


def span_size(ctx, vectors, dim):
    out = set()
    for coeffs in itertools.product(range(ctx.q), repeat=len(vectors)):
        acc = [0] * dim
        for c, v in zip(coeffs, vectors):
            acc = [ctx.add(a, ctx.mul(c, x)) for a, x in zip(acc, v)]
        out.add(tuple(acc))
    return out


# -- worked examples --------------------------------------------------------

def test_mat_mul_examples():
    A = GfMatrix.from_rows(F3, [[1, 2, 0], [0, 1, 1], [2, 2, 2]])
    assert mat_mul(GfMatrix.identity(F3, 3), A) == A
    for q in (2, 3, 4, 5):
        J = GfMatrix.jordan(make_field(q), 2)
        assert (J @ J).is_zero()
    a = GfMatrix.from_rows(F2, [[1, 1], [0, 1]])
    b = GfMatrix.from_rows(F2, [[1, 0], [1, 1]])
    assert (a @ b).to_list() == [[0, 1], [1, 1]]


def test_mat_mul_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        GfMatrix.zeros(F2, 2, 3) @ GfMatrix.zeros(F2, 2, 3)


def test_rank_examples():
    assert rank(GfMatrix.zeros(F2, 3, 4)) == 0
    assert rank(GfMatrix.identity(F3, 4)) == 4
    assert rank(GfMatrix.from_rows(F2, [[1, 1], [1, 1]])) == 1


def test_is_nilpotent_examples():
    assert is_nilpotent(GfMatrix.zeros(F2, 3, 3))
    assert not is_nilpotent(GfMatrix.identity(F2, 1))
    assert is_nilpotent(GfMatrix.jordan(F2, 3))
    with pytest.raises(NotSquare):
        is_nilpotent(GfMatrix.zeros(F2, 2, 3))


def test_cyclic_length_examples():
    J = GfMatrix.jordan(F2, 3)
    assert cyclic_length(J, (0, 0, 0)) == 0
    assert cyclic_length(J, (1, 0, 0)) == 3
    assert cyclic_length(J, (0, 0, 1)) == 1
    with pytest.raises(NotNilpotentOrbit):
        cyclic_length(GfMatrix.identity(F2, 2), (1, 0))


def test_kernel_profile_examples():
    zero = LinearPair.from_lists(F2, 2, 2, [[0, 0], [0, 0]], [[0, 0], [0, 0]])
    kp = kernel_profile(zero)
    assert kp.d[0] == 2 and kp.dPrime[:2] == (0, 2)
    kp = kernel_profile(LinearPair.from_lists(F2, 1, 1, [[1]], [[0]]))
    assert kp.d[0] == 0 and kp.dPrime[1] == 1
    with pytest.raises(NotNilpotentPair):
        kernel_profile(LinearPair.from_lists(F2, 1, 1, [[1]], [[1]]))


def test_kernel_profile_rectangular_example():
    # f = (1 0), g = (0 1)^T: gf = [[0,0],[1,0]] has a one-dimensional kernel
    pair = LinearPair.from_lists(F2, 2, 1, [[1, 0]], [[0], [1]])
    assert pair.gf.to_list() == [[0, 0], [1, 0]]
    assert kernel_dim_bruteforce(pair.f) == 1
    assert kernel_dim_bruteforce(pair.gf) == 1
    kp = kernel_profile(pair)
    assert kp.d == (1, 2)
    assert kp.dPrime == (0, 1, 2)


def test_fitting_examples():
    for q in (2, 3):
        ctx = make_field(q)
        I = GfMatrix.identity(ctx, 3)
        fd = fitting_decompose(LinearPair(ctx, 3, 3, I, I))
        assert len(fd.basisVI) == len(fd.basisWI) == 3 and not fd.basisVN and not fd.basisWN
        z = GfMatrix.zeros(ctx, 3, 2)
        fd = fitting_decompose(LinearPair(ctx, 2, 3, z, z.transpose()))
        assert len(fd.basisVN) == 2 and len(fd.basisWN) == 3
    diag = [[1, 0], [0, 0]]
    fd = fitting_decompose(LinearPair.from_lists(F2, 2, 2, diag, diag))
    assert [len(fd.basisVI), len(fd.basisVN), len(fd.basisWI), len(fd.basisWN)] == [1, 1, 1, 1]


# -- exhaustive properties --------------------------------------------------

@pytest.mark.parametrize("ctx,s", [(F2, 1), (F2, 2), (F2, 3), (F3, 1), (F3, 2), (F3, 3)])
def test_nilpotent_iff_some_power_vanishes(ctx, s):
    for A in all_square(ctx, s):
        P, hit = A, False
        for _ in range(s):
            if P.is_zero():
                hit = True
                break
            P = P @ A
        assert is_nilpotent(A) == hit


@given(st.sampled_from([2, 3]), st.lists(st.integers(0, 2), min_size=16, max_size=16))
def test_nilpotent_sampled_size4(q, entries):
    ctx = make_field(q)
    A = GfMatrix.from_rows(ctx, [[e % q for e in entries[i * 4:(i + 1) * 4]] for i in range(4)])
    powers, P = [], A
    for _ in range(4):
        powers.append(P.is_zero())
        P = P @ A
    assert is_nilpotent(A) == any(powers)


def pairs_q2(max_dim=3):
    for m in range(max_dim + 1):
        for n in range(max_dim + 1):
            if 2 ** (2 * m * n) > 2**12:
                continue
            yield from all_linear_pairs(F2, m, n)


def test_fitting_decomposition_exhaustive():
    count = 0
    for pair in pairs_q2():
        ctx, m, n = pair.ctx, pair.m, pair.n
        fd = fitting_decompose(pair)
        assert len(fd.basisVI) + len(fd.basisVN) == m
        assert len(fd.basisWI) + len(fd.basisWN) == n
        assert len(span_basis(ctx, fd.basisVI + fd.basisVN, m)) == m
        assert len(span_basis(ctx, fd.basisWI + fd.basisWN, n)) == n
        assert len(fd.basisVI) == len(fd.basisWI)
        # gf invertible on V_I, nilpotent on V_N
        if fd.basisVI:
            assert rank(fd.S2 @ fd.S1) == len(fd.basisVI)
            assert rank(fd.S1) == rank(fd.S2) == len(fd.basisVI)
        assert is_nilpotent(fd.N2 @ fd.N1) or not fd.basisVN
        # f, g respect the splitting
        VI, VN = span_size(ctx, fd.basisVI, m), span_size(ctx, fd.basisVN, m)
        WI, WN = span_size(ctx, fd.basisWI, n), span_size(ctx, fd.basisWN, n)
        assert all(tuple(pair.f.apply(v)) in WI for v in VI)
        assert all(tuple(pair.f.apply(v)) in WN for v in VN)
        assert all(tuple(pair.g.apply(w)) in VI for w in WI)
        assert all(tuple(pair.g.apply(w)) in VN for w in WN)
        count += 1
    assert count > 4000


def test_kernel_profile_interleaving_exhaustive():
    for pair in pairs_q2():
        if not is_nilpotent(pair.gf):
            continue
        kp = kernel_profile(pair)
        assert kp.dPrime[0] == 0 and kp.dPrime[-1] == pair.m
        assert len(kp.dPrime) <= pair.m + 1
        for i, di in enumerate(kp.d, start=1):
            assert kp.dPrime[i - 1] <= di <= kp.dPrime[i]
            assert di == kernel_dim_bruteforce(pair.f @ pair.gf.power(i - 1))


def test_composites_invertible_iff_both_maps_are():
    for m in range(3):
        for n in range(3):
            for pair in all_linear_pairs(F2, m, n):
                both = rank(pair.gf) == m and rank(pair.fg) == n
                isos = m == n and rank(pair.f) == m and rank(pair.g) == n
                assert both == isos


def test_complement_and_inverse():
    for A in all_square(F3, 2):
        if rank(A) == 2:
            assert inverse(A) @ A == GfMatrix.identity(F3, 2)
        ker = nullspace(A)
        comp = complement_basis(F3, ker, 2)
        assert len(span_basis(F3, list(ker) + list(comp), 2)) == 2
        assert len(ker) == kernel_dim_bruteforce(A)


@given(st.sampled_from([4, 5, 8, 9]), st.data())
def test_matmul_associative(q, data):
    ctx = make_field(q)
    dims = data.draw(st.lists(st.integers(1, 4), min_size=4, max_size=4))

    def mat(r, c):
        return GfMatrix.from_rows(ctx, data.draw(st.lists(
            st.lists(st.integers(0, q - 1), min_size=c, max_size=c), min_size=r, max_size=r)), c)

    A, B, C = mat(dims[0], dims[1]), mat(dims[1], dims[2]), mat(dims[2], dims[3])
    assert (A @ B) @ C == A @ (B @ C)
    assert rank(A @ B) <= min(rank(A), rank(B))
    assert (A @ B).transpose() == B.transpose() @ A.transpose()
