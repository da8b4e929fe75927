"""Nilpotent pairs over F_q, balanced vectors, and the bijection Theta.

For a pair f: V -> W, g: W -> V write T = gf and T' = fg.  A vector v is
balanced when dim T[v] = dim T'[fv] (its length) and unbalanced when the
second dimension is one less.

Theta sends a nilpotent pair with a balanced vector of length l to an
arbitrary pair of maps.  With X = T[v] (ordered basis b = v, Tv, ...) and
X' = T'[fv] (ordered basis b' = fv, T'fv, ...), let c, c' be the canonical
echelon bases and C, C' the standard complements.  In the bases (b | C) and
(b' | C'), f = [[I, A], [0, fbar]] and g = [[J, B], [0, gbar]].  The image
pair (f', g') has Fitting parts V_I = X, W_I = X' with

    f'(c_j) = b'_j,   g'(c'_j) = b_j,

nilpotent parts spanned by u_k = C_k + sum_i A[i,k] b_i and
u'_k = C'_k + sum_i B[i,k] b'_i, and acts there by fbar, gbar.  Every step
is reversible from the Fitting decomposition of (f', g'), which is how
:func:`theta_inverse` works.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator

import numpy as np

from . import _batch
from ._parallel import sharded_map, split_range
from .errors import InvalidTriple, NotNilpotentPair, TooLarge
from .finite_field import FieldCtx, make_field
from .matrix_gfq import (
    GfMatrix,
    LinearPair,
    Vector,
    complement_basis,
    coordinates,
    cyclic_length,
    fitting_decompose,
    inverse,
    is_nilpotent,
    kernel_profile,
    lin_comb,
    rank,
    span_basis,
)

PAIR_CAP = 10**8
TRIPLE_CAP = 10**8
RANK_CAP = 10**7
# pairs held in memory per batched chunk
_CHUNK_PAIRS = 1 << 16


class Tag(enum.Enum):
    BALANCED = "balanced"
    UNBALANCED = "unbalanced"


@dataclass(frozen=True)
class BalancedClass:
    vector: Vector
    a: int
    ell: int
    tag: Tag


def is_nilpotent_pair(pair: LinearPair) -> bool:
    return is_nilpotent(pair.gf)


def classify_vector(pair: LinearPair, v) -> BalancedClass:
    """Compare dim T[v] with dim T'[fv]."""
    if not is_nilpotent_pair(pair):
        raise NotNilpotentPair("gf is not nilpotent")
    v = tuple(v)
    a = cyclic_length(pair.gf, v)
    ell = cyclic_length(pair.fg, pair.f.apply(v))
    if a == ell:
        tag = Tag.BALANCED
    elif ell == a - 1:
        tag = Tag.UNBALANCED
    else:
        raise AssertionError(f"length gap {a - ell} cannot occur for a nilpotent pair")
    return BalancedClass(v, a, ell, tag)


def classify_w(pair: LinearPair, w) -> BalancedClass:
    """Classification of w in W, i.e. dim T'[w] against dim T[gw]."""
    return classify_vector(pair.swapped(), w)


def all_vectors(q: int, dim: int) -> Iterator[Vector]:
    return product(range(q), repeat=dim)


def all_linear_pairs(ctx: FieldCtx, m: int, n: int) -> Iterator[LinearPair]:
    """Every (f, g), lexicographic over the concatenated row-major entries."""
    for fe in product(range(ctx.q), repeat=m * n):
        f = GfMatrix.from_rows(ctx, [fe[i * m:(i + 1) * m] for i in range(n)], m)
        for ge in product(range(ctx.q), repeat=m * n):
            g = GfMatrix.from_rows(ctx, [ge[i * n:(i + 1) * n] for i in range(m)], n)
            yield LinearPair(ctx, m, n, f, g)


def nilpotent_linear_pairs(ctx: FieldCtx, m: int, n: int) -> Iterator[LinearPair]:
    return (p for p in all_linear_pairs(ctx, m, n) if is_nilpotent_pair(p))


def balanced_vectors(pair: LinearPair) -> list[Vector]:
    return [v for v in all_vectors(pair.ctx.q, pair.m) if classify_vector(pair, v).tag is Tag.BALANCED]


def balanced_count_kernel_formula(pair: LinearPair) -> int:
    """|v_b| = sum_i q^(d'_i) - sum_i q^(d_i) from the kernel profile."""
    prof = kernel_profile(pair)
    q = pair.ctx.q
    return sum(q**d for d in prof.dPrime) - sum(q**d for d in prof.d)


# ---------------------------------------------------------------------------
# batched enumeration
# ---------------------------------------------------------------------------


@dataclass
class PairStats:
    """Tallies over nilpotent pairs (and, when requested, over vectors)."""

    nilpotent: int = 0
    # balanced v in V, by length
    length_hist: list[int] = field(default_factory=list)
    # |(f,g,v_b)|, |(f,g,w_b)|, |(f,g,v_b,w_b)|, |(f,g,v_u,w_u)|
    v_balanced: int = 0
    w_balanced: int = 0
    both_balanced: int = 0
    both_unbalanced: int = 0
    bad_gaps: int = 0

    def merge(self, other: PairStats) -> PairStats:
        hist = [a + b for a, b in zip(self.length_hist, other.length_hist)]
        return PairStats(
            self.nilpotent + other.nilpotent,
            hist,
            self.v_balanced + other.v_balanced,
            self.w_balanced + other.w_balanced,
            self.both_balanced + other.both_balanced,
            self.both_unbalanced + other.both_unbalanced,
            self.bad_gaps + other.bad_gaps,
        )


def _chunk_stats(args: tuple[int, int, int, int, int, bool]) -> PairStats:
    q, m, n, lo, hi, with_vectors = args
    ctx = make_field(q)
    F = _batch.all_matrices(q, n, m, lo, hi)[:, None]
    G = _batch.all_matrices(q, m, n)[None]
    T = _batch.matmul(ctx, G, F)
    mask = _batch.is_nilpotent(ctx, T)
    stats = PairStats(int(mask.sum()), [0] * (min(m, n) + 1))
    if not with_vectors or not stats.nilpotent:
        return stats
    Fn = np.broadcast_to(F, mask.shape + F.shape[-2:])[mask]
    Gn = np.broadcast_to(G, mask.shape + G.shape[-2:])[mask]
    Tn = T[mask]
    Tp = _batch.matmul(ctx, Fn, Gn)
    V = _batch.index_digits(q, m, 0, q**m) if m else np.zeros((1, 0), dtype=np.int64)
    W = _batch.index_digits(q, n, 0, q**n) if n else np.zeros((1, 0), dtype=np.int64)

    a = _batch.orbit_lengths(ctx, Tn[:, None], V[None])
    ell = _batch.orbit_lengths(ctx, Tp[:, None], _batch.matvec(ctx, Fn[:, None], V[None]))
    b = _batch.orbit_lengths(ctx, Tp[:, None], W[None])
    ell_w = _batch.orbit_lengths(ctx, Tn[:, None], _batch.matvec(ctx, Gn[:, None], W[None]))
    stats.bad_gaps = int((~np.isin(a - ell, (0, 1))).sum() + (~np.isin(b - ell_w, (0, 1))).sum())

    bal_v = a == ell
    bal_w = b == ell_w
    stats.length_hist = np.bincount(a[bal_v], minlength=min(m, n) + 1).tolist()
    nb_v = bal_v.sum(axis=1)
    nb_w = bal_w.sum(axis=1)
    stats.v_balanced = int(nb_v.sum())
    stats.w_balanced = int(nb_w.sum())
    stats.both_balanced = int((nb_v * nb_w).sum())
    stats.both_unbalanced = int(((q**m - nb_v) * (q**n - nb_w)).sum())
    return stats


def pair_stats(q: int, m: int, n: int, with_vectors: bool = True, workers: int | None = None) -> PairStats:
    """Exhaustive tallies over Hom(V,W) x Hom(W,V), sharded by f."""
    make_field(q)
    nf = q ** (m * n)
    chunk = max(1, _CHUNK_PAIRS // (nf * max(1, q**m if with_vectors else 1)))
    shards = [(q, m, n, lo, hi, with_vectors) for lo, hi in split_range(0, nf, chunk)]
    total = PairStats(0, [0] * (min(m, n) + 1))
    for s in sharded_map(_chunk_stats, shards, workers):
        total = total.merge(s)
    return total


def enumerate_nilpotent_pairs(q: int, m: int, n: int, workers: int | None = None, cap: int = PAIR_CAP) -> int:
    """Brute-force count of pairs with gf nilpotent."""
    if q ** (2 * m * n) > cap:
        raise TooLarge(f"{q ** (2 * m * n)} pairs exceed the cap {cap}")
    return pair_stats(q, m, n, with_vectors=False, workers=workers).nilpotent


def enumerate_balanced_triples(
    q: int, m: int, n: int, ell: int | None = None, workers: int | None = None, cap: int = TRIPLE_CAP
) -> int:
    """Count (nilpotent pair, balanced v), optionally restricted to length ``ell``."""
    if q ** (2 * m * n) * q**m > cap:
        raise TooLarge(f"{q ** (2 * m * n) * q**m} triples exceed the cap {cap}")
    hist = pair_stats(q, m, n, workers=workers).length_hist
    if ell is None:
        return sum(hist)
    return hist[ell] if 0 <= ell < len(hist) else 0


def rank_distribution(q: int, m: int, n: int, cap: int = RANK_CAP) -> list[int]:
    """Number of n x m matrices of each rank 0..min(m, n), by exhaustive elimination."""
    if q ** (m * n) > cap:
        raise TooLarge(f"{q ** (m * n)} matrices exceed the cap {cap}")
    ctx = make_field(q)
    counts = [0] * (min(m, n) + 1)
    for entries in product(range(q), repeat=m * n):
        A = GfMatrix.from_rows(ctx, [entries[i * m:(i + 1) * m] for i in range(n)], m)
        counts[rank(A)] += 1
    return counts


def count_rank_maps(q: int, m: int, n: int, r: int, cap: int = RANK_CAP) -> int:
    dist = rank_distribution(q, m, n, cap)
    return dist[r] if 0 <= r < len(dist) else 0


# ---------------------------------------------------------------------------
# structural facts about balanced vectors, checked per pair
# ---------------------------------------------------------------------------


def _span_elements(ctx: FieldCtx, basis: list[Vector], dim: int) -> Iterator[Vector]:
    for coeffs in product(range(ctx.q), repeat=len(basis)):
        yield lin_comb(ctx, coeffs, basis, dim)


def structural_violations(pair: LinearPair) -> dict[str, int]:
    """Count violations of the four balanced/unbalanced facts, on both sides."""
    out = {"subspace_balanced": 0, "subspace_unbalanced": 0, "balanced_image": 0, "unbalanced_image": 0}
    for here, there in ((pair, pair.swapped()), (pair.swapped(), pair)):
        ctx, dim = here.ctx, here.m
        T = here.gf
        tags = {v: classify_vector(here, v).tag for v in all_vectors(ctx.q, dim)}
        other = {w: classify_vector(there, w).tag for w in all_vectors(ctx.q, here.n)}
        for v, tag in tags.items():
            a = cyclic_length(T, v)
            orbit = [v]
            for _ in range(a - 1):
                orbit.append(T.apply(orbit[-1]))
            span = list(_span_elements(ctx, orbit, dim)) if a else [v]
            fv = here.f.apply(v)
            if tag is Tag.BALANCED:
                out["subspace_balanced"] += sum(tags[u] is not Tag.BALANCED for u in span)
                if any(fv) and other[fv] is not Tag.UNBALANCED:
                    out["balanced_image"] += 1
            else:
                out["subspace_unbalanced"] += sum(tags[u] is not Tag.UNBALANCED for u in span if any(u))
                if other[fv] is not Tag.BALANCED:
                    out["unbalanced_image"] += 1
    return out


# ---------------------------------------------------------------------------
# Theta
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NilpotentTriple:
    pair: LinearPair
    v: Vector

    def __post_init__(self):
        if len(self.v) != self.pair.m:
            raise InvalidTriple("vector has the wrong length")
        if not is_nilpotent_pair(self.pair):
            raise InvalidTriple("pair is not nilpotent")
        if classify_vector(self.pair, self.v).tag is not Tag.BALANCED:
            raise InvalidTriple("vector is not balanced")

    @property
    def length(self) -> int:
        return cyclic_length(self.pair.gf, self.v)


def _krylov(T: GfMatrix, v: Vector, length: int) -> list[Vector]:
    out = []
    for _ in range(length):
        out.append(v)
        v = T.apply(v)
    return out


def _cols(ctx: FieldCtx, vectors: list[Vector], dim: int) -> GfMatrix:
    return GfMatrix.from_columns(ctx, vectors, dim)


def _block(M: GfMatrix, r0: int, r1: int, c0: int, c1: int) -> GfMatrix:
    return GfMatrix.from_rows(M.ctx, [row[c0:c1] for row in M.entries[r0:r1]], c1 - c0)


def _stack(ctx: FieldCtx, tl: GfMatrix, tr: GfMatrix, bl: GfMatrix, br: GfMatrix) -> GfMatrix:
    rows = [a + b for a, b in zip(tl.entries, tr.entries)] + [a + b for a, b in zip(bl.entries, br.entries)]
    return GfMatrix.from_rows(ctx, rows, tl.cols + tr.cols)


def _shifted(ctx: FieldCtx, complement: list[Vector], mix: GfMatrix, basis: list[Vector], dim: int) -> list[Vector]:
    """u_k = complement_k + sum_i mix[i, k] basis_i."""
    return [
        tuple(ctx.add(x, y) for x, y in zip(c, lin_comb(ctx, mix.column(k), basis, dim)))
        for k, c in enumerate(complement)
    ]


def theta(t: NilpotentTriple) -> LinearPair:
    """Map a nilpotent pair with a balanced vector to an arbitrary pair of maps."""
    pair, v = t.pair, t.v
    ctx, m, n = pair.ctx, pair.m, pair.n
    ell = t.length
    b = _krylov(pair.gf, v, ell)
    bp = _krylov(pair.fg, pair.f.apply(v), ell)
    c, cp = span_basis(ctx, b, m), span_basis(ctx, bp, n)
    Cv, Cw = complement_basis(ctx, b, m), complement_basis(ctx, bp, n)

    PV, PW = _cols(ctx, b + Cv, m), _cols(ctx, bp + Cw, n)
    Fb = inverse(PW) @ pair.f @ PV
    Gb = inverse(PV) @ pair.g @ PW
    if _block(Fb, 0, ell, 0, ell) != GfMatrix.identity(ctx, ell) or _block(Gb, 0, ell, 0, ell) != GfMatrix.jordan(ctx, ell):
        raise InvalidTriple("cyclic blocks are not in normal form")
    A, fbar = _block(Fb, 0, ell, ell, m), _block(Fb, ell, n, ell, m)
    B, gbar = _block(Gb, 0, ell, ell, n), _block(Gb, ell, m, ell, n)

    U = _shifted(ctx, Cv, A, b, m)
    Up = _shifted(ctx, Cw, B, bp, n)
    QV, QW = _cols(ctx, c + U, m), _cols(ctx, cp + Up, n)
    f_new = _cols(ctx, bp + (_cols(ctx, Up, n) @ fbar).columns(), n) @ inverse(QV)
    g_new = _cols(ctx, b + (_cols(ctx, U, m) @ gbar).columns(), m) @ inverse(QW)
    return LinearPair(ctx, m, n, f_new, g_new)


def theta_inverse(pair: LinearPair) -> NilpotentTriple:
    """Recover the (nilpotent pair, balanced vector) whose Theta image is ``pair``."""
    ctx, m, n = pair.ctx, pair.m, pair.n
    fd = fitting_decompose(pair)
    ell = len(fd.basisVI)
    c, cp = list(fd.basisVI), list(fd.basisWI)
    b = [pair.g.apply(w) for w in cp]
    bp = [pair.f.apply(x) for x in c]
    Cv, Cw = complement_basis(ctx, c, m), complement_basis(ctx, cp, n)

    def nilpotent_lift(complement, basis, nil_basis, dim):
        # u_k in the nilpotent part with u_k - complement_k in span(basis)
        coeffs, lifted = [], []
        for vec in complement:
            alpha = coordinates(ctx, basis + nil_basis, vec)
            x = lin_comb(ctx, alpha[: len(basis)], basis, dim)
            lifted.append(tuple(ctx.sub(p, r) for p, r in zip(vec, x)))
            coeffs.append(tuple(ctx.neg(a) for a in alpha[: len(basis)]))
        return lifted, GfMatrix.from_columns(ctx, coeffs, len(basis))

    U, A = nilpotent_lift(Cv, b, list(fd.basisVN), m)
    Up, B = nilpotent_lift(Cw, bp, list(fd.basisWN), n)
    fbar = GfMatrix.from_columns(ctx, [coordinates(ctx, Up, pair.f.apply(u)) for u in U], n - ell)
    gbar = GfMatrix.from_columns(ctx, [coordinates(ctx, U, pair.g.apply(u)) for u in Up], m - ell)

    Fb = _stack(ctx, GfMatrix.identity(ctx, ell), A, GfMatrix.zeros(ctx, n - ell, ell), fbar)
    Gb = _stack(ctx, GfMatrix.jordan(ctx, ell), B, GfMatrix.zeros(ctx, m - ell, ell), gbar)
    PV, PW = _cols(ctx, b + Cv, m), _cols(ctx, bp + Cw, n)
    f = PW @ Fb @ inverse(PV)
    g = PV @ Gb @ inverse(PW)
    v = b[0] if ell else (0,) * m
    return NilpotentTriple(LinearPair(ctx, m, n, f, g), v)


@dataclass
class ThetaAudit:
    q: int
    m: int
    n: int
    triples: int = 0
    image_size: int = 0
    hom_size: int = 0
    collisions: int = 0
    roundtrip_failures: int = 0
    rows: list[dict] = field(default_factory=list)

    @property
    def injective(self) -> bool:
        return self.collisions == 0

    @property
    def full_image(self) -> bool:
        return self.image_size == self.hom_size

    @property
    def ok(self) -> bool:
        return self.injective and self.full_image and self.roundtrip_failures == 0


def audit_theta(q: int, m: int, n: int, keep_rows: bool = False, cap: int = TRIPLE_CAP) -> ThetaAudit:
    """Apply Theta to every triple; check injectivity, image size and the inverse."""
    if q ** (2 * m * n) * q**m > cap:
        raise TooLarge(f"{q ** (2 * m * n) * q**m} candidate triples exceed the cap {cap}")
    ctx = make_field(q)
    audit = ThetaAudit(q, m, n, hom_size=q ** (2 * m * n))
    image: dict[LinearPair, NilpotentTriple] = {}
    for pair in nilpotent_linear_pairs(ctx, m, n):
        for v in balanced_vectors(pair):
            t = NilpotentTriple(pair, v)
            out = theta(t)
            audit.triples += 1
            if out in image:
                audit.collisions += 1
            image[out] = t
            if theta_inverse(out) != t:
                audit.roundtrip_failures += 1
            if keep_rows:
                audit.rows.append({
                    "f": pair.f.to_list(), "g": pair.g.to_list(), "v": list(v),
                    "length": t.length, "f_image": out.f.to_list(), "g_image": out.g.to_list(),
                })
    audit.image_size = len(image)
    return audit
