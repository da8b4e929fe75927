"""Matrices over F_q and the linear algebra of pairs of maps.

Vectors are coordinate columns stored as tuples of field elements.  A map
``f: F_q^m -> F_q^n`` is the n x m matrix acting on the left.  Subspaces are
described by their reduced row echelon basis, which is canonical: two
spanning sets of the same subspace always produce the same basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import NotNilpotentOrbit, NotNilpotentPair, NotSquare, ShapeMismatch
from .finite_field import FieldCtx

Vector = tuple[int, ...]


@dataclass(frozen=True)
class GfMatrix:
    ctx: FieldCtx
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ShapeMismatch(f"entries do not form a {self.rows}x{self.cols} grid")
        q = self.ctx.q
        if any(not 0 <= x < q for r in self.entries for x in r):
            raise ValueError(f"entry outside [0, {q})")

    @classmethod
    def from_rows(cls, ctx: FieldCtx, rows: Iterable[Iterable[int]], cols: int | None = None) -> GfMatrix:
        grid = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            if not grid:
                raise ShapeMismatch("column count is required for a matrix with no rows")
            cols = len(grid[0])
        return cls(ctx, len(grid), cols, grid)

    @classmethod
    def from_columns(cls, ctx: FieldCtx, columns: Sequence[Sequence[int]], rows: int) -> GfMatrix:
        grid = tuple(tuple(c[i] for c in columns) for i in range(rows))
        return cls(ctx, rows, len(columns), grid)

    @classmethod
    def zeros(cls, ctx: FieldCtx, rows: int, cols: int) -> GfMatrix:
        return cls(ctx, rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, ctx: FieldCtx, size: int) -> GfMatrix:
        return cls(ctx, size, size, tuple(tuple(int(i == j) for j in range(size)) for i in range(size)))

    @classmethod
    def jordan(cls, ctx: FieldCtx, size: int) -> GfMatrix:
        """Nilpotent Jordan block: ones immediately below the diagonal."""
        return cls(ctx, size, size, tuple(tuple(int(i == j + 1) for j in range(size)) for i in range(size)))

    def __matmul__(self, other: GfMatrix) -> GfMatrix:
        return mat_mul(self, other)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.cols:
            raise ShapeMismatch(f"vector of length {len(v)} for a matrix with {self.cols} columns")
        add, mul = self.ctx.add, self.ctx.mul
        out = []
        for row in self.entries:
            acc = 0
            for a, x in zip(row, v):
                if a and x:
                    acc = add(acc, mul(a, x))
            out.append(acc)
        return tuple(out)

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> GfMatrix:
        return GfMatrix.from_columns(self.ctx, self.entries, self.cols)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def power(self, e: int) -> GfMatrix:
        if self.rows != self.cols:
            raise NotSquare(f"{self.rows}x{self.cols} matrix has no powers")
        result = GfMatrix.identity(self.ctx, self.rows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def to_list(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def mat_mul(A: GfMatrix, B: GfMatrix) -> GfMatrix:
    if A.ctx != B.ctx:
        raise ShapeMismatch("matrices live over different fields")
    if A.cols != B.rows:
        raise ShapeMismatch(f"cannot multiply {A.rows}x{A.cols} by {B.rows}x{B.cols}")
    add, mul = A.ctx.add, A.ctx.mul
    bcols = B.columns()
    grid = []
    for row in A.entries:
        out = []
        for col in bcols:
            acc = 0
            for a, b in zip(row, col):
                if a and b:
                    acc = add(acc, mul(a, b))
            out.append(acc)
        grid.append(tuple(out))
    return GfMatrix(A.ctx, A.rows, B.cols, tuple(grid))


# ---------------------------------------------------------------------------
# Gaussian elimination
# ---------------------------------------------------------------------------


def rref(ctx: FieldCtx, rows: Iterable[Sequence[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and their pivot columns."""
    R = [list(r) for r in rows]
    add, mul, neg, inv = ctx.add, ctx.mul, ctx.neg, ctx.inv
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        found = next((i for i in range(top, len(R)) if R[i][col]), None)
        if found is None:
            continue
        R[top], R[found] = R[found], R[top]
        s = inv(R[top][col])
        R[top] = [mul(s, x) for x in R[top]]
        for i in range(len(R)):
            c = R[i][col]
            if i != top and c:
                c = neg(c)
                R[i] = [add(x, mul(c, y)) for x, y in zip(R[i], R[top])]
        pivots.append(col)
        top += 1
        if top == len(R):
            break
    return R[:top], pivots


def rank(A: GfMatrix) -> int:
    return len(rref(A.ctx, A.entries, A.cols)[1])


def span_basis(ctx: FieldCtx, vectors: Iterable[Sequence[int]], dim: int) -> list[Vector]:
    """Canonical (reduced echelon) basis of the span of ``vectors`` in F_q^dim."""
    R, _ = rref(ctx, vectors, dim)
    return [tuple(r) for r in R]


def complement_basis(ctx: FieldCtx, basis: Iterable[Sequence[int]], dim: int) -> list[Vector]:
    """Standard vectors e_i, i increasing, at the non-pivot positions of ``basis``."""
    _, pivots = rref(ctx, basis, dim)
    pivots = set(pivots)
    return [tuple(int(i == j) for j in range(dim)) for i in range(dim) if i not in pivots]


def nullspace(A: GfMatrix) -> list[Vector]:
    """Canonical basis of ``ker A``."""
    ctx = A.ctx
    R, pivots = rref(ctx, A.entries, A.cols)
    free = [j for j in range(A.cols) if j not in set(pivots)]
    raw = []
    for j in free:
        v = [0] * A.cols
        v[j] = 1
        for row, pc in zip(R, pivots):
            v[pc] = ctx.neg(row[j])
        raw.append(v)
    return span_basis(ctx, raw, A.cols)


def image_basis(A: GfMatrix) -> list[Vector]:
    """Canonical basis of the column space of A."""
    return span_basis(A.ctx, A.columns(), A.rows)


def solve(A: GfMatrix, b: Sequence[int]) -> Vector | None:
    """One solution x of ``A x = b`` (free variables zero), or None."""
    ctx = A.ctx
    aug = [list(r) + [bi] for r, bi in zip(A.entries, b)]
    R, pivots = rref(ctx, aug, A.cols + 1)
    if pivots and pivots[-1] == A.cols:
        return None
    x = [0] * A.cols
    for row, pc in zip(R, pivots):
        x[pc] = row[-1]
    return tuple(x)


def coordinates(ctx: FieldCtx, basis: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    """Coefficients of v in a linearly independent ``basis``; ValueError if v is outside the span."""
    x = solve(GfMatrix.from_columns(ctx, basis, len(v)), v)
    if x is None:
        raise ValueError("vector is not in the span of the basis")
    return x


def inverse(A: GfMatrix) -> GfMatrix:
    if A.rows != A.cols:
        raise NotSquare(f"{A.rows}x{A.cols} matrix is not invertible")
    s = A.rows
    eye = GfMatrix.identity(A.ctx, s).entries
    R, pivots = rref(A.ctx, [list(r) + list(e) for r, e in zip(A.entries, eye)], 2 * s)
    if pivots[:s] != list(range(s)) or len(R) < s:
        raise ValueError("matrix is singular")
    return GfMatrix.from_rows(A.ctx, [r[s:] for r in R], s)


def lin_comb(ctx: FieldCtx, coeffs: Sequence[int], vectors: Sequence[Sequence[int]], dim: int) -> Vector:
    out = [0] * dim
    for c, v in zip(coeffs, vectors):
        if c:
            out = [ctx.add(o, ctx.mul(c, x)) for o, x in zip(out, v)]
    return tuple(out)


# ---------------------------------------------------------------------------
# Nilpotency and cyclic subspaces
# ---------------------------------------------------------------------------


def is_nilpotent(A: GfMatrix) -> bool:
    """A square matrix of size s is nilpotent iff A^s = 0."""
    if A.rows != A.cols:
        raise NotSquare(f"{A.rows}x{A.cols} matrix")
    return A.power(A.rows).is_zero()


def cyclic_length(T: GfMatrix, v: Sequence[int]) -> int:
    """Least a >= 0 with T^a v = 0, i.e. dim T[v]."""
    if T.rows != T.cols:
        raise NotSquare(f"{T.rows}x{T.cols} matrix")
    x = tuple(v)
    for a in range(T.rows + 1):
        if not any(x):
            return a
        x = T.apply(x)
    raise NotNilpotentOrbit("orbit does not reach zero within the dimension bound")


# ---------------------------------------------------------------------------
# Pairs of maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearPair:
    """f: V -> W (n x m) and g: W -> V (m x n) with dim V = m, dim W = n."""

    ctx: FieldCtx
    m: int
    n: int
    f: GfMatrix
    g: GfMatrix

    def __post_init__(self):
        if (self.f.rows, self.f.cols) != (self.n, self.m) or (self.g.rows, self.g.cols) != (self.m, self.n):
            raise ShapeMismatch(
                f"f must be {self.n}x{self.m} and g {self.m}x{self.n}, "
                f"got {self.f.rows}x{self.f.cols} and {self.g.rows}x{self.g.cols}"
            )

    @classmethod
    def from_lists(cls, ctx: FieldCtx, m: int, n: int, f, g) -> LinearPair:
        return cls(ctx, m, n, GfMatrix.from_rows(ctx, f, m), GfMatrix.from_rows(ctx, g, n))

    @property
    def gf(self) -> GfMatrix:
        return self.g @ self.f

    @property
    def fg(self) -> GfMatrix:
        return self.f @ self.g

    def swapped(self) -> LinearPair:
        """The pair (g, f) seen from W; T and T' trade places."""
        return LinearPair(self.ctx, self.n, self.m, self.g, self.f)


@dataclass(frozen=True)
class FittingData:
    basisVI: tuple[Vector, ...]
    basisVN: tuple[Vector, ...]
    basisWI: tuple[Vector, ...]
    basisWN: tuple[Vector, ...]
    S1: GfMatrix  # f restricted V_I -> W_I
    N1: GfMatrix  # f restricted V_N -> W_N
    S2: GfMatrix  # g restricted W_I -> V_I
    N2: GfMatrix  # g restricted W_N -> V_N


def _restricted_block(M: GfMatrix, src: Sequence[Vector], dst: Sequence[Vector]) -> GfMatrix:
    """Matrix of M on span(src) in the bases src -> dst; the image must lie in span(dst)."""
    ctx = M.ctx
    cols = [coordinates(ctx, dst, M.apply(s)) for s in src]
    return GfMatrix.from_columns(ctx, cols, len(dst))


def fitting_decompose(pair: LinearPair) -> FittingData:
    """Split V and W into the parts where gf (resp. fg) is invertible and nilpotent.

    V_I = im((gf)^m) and V_N = ker((gf)^m); likewise W with fg and n.
    """
    ctx, m, n = pair.ctx, pair.m, pair.n
    Tm = pair.gf.power(m)
    Tn = pair.fg.power(n)
    VI, VN = image_basis(Tm), nullspace(Tm)
    WI, WN = image_basis(Tn), nullspace(Tn)
    return FittingData(
        tuple(VI), tuple(VN), tuple(WI), tuple(WN),
        S1=_restricted_block(pair.f, VI, WI),
        N1=_restricted_block(pair.f, VN, WN),
        S2=_restricted_block(pair.g, WI, VI),
        N2=_restricted_block(pair.g, WN, VN),
    )


@dataclass(frozen=True)
class KernelProfile:
    """d[i-1] = dim ker f(gf)^(i-1) for i >= 1 and dPrime[i] = dim ker (gf)^i for i >= 0."""

    d: tuple[int, ...]
    dPrime: tuple[int, ...]


def kernel_profile(pair: LinearPair) -> KernelProfile:
    """Both kernel sequences, truncated at the first k with dPrime[k] = m."""
    if not is_nilpotent(pair.gf):
        raise NotNilpotentPair("gf is not nilpotent")
    m = pair.m
    T = pair.gf
    d: list[int] = []
    dp = [0]
    P = GfMatrix.identity(pair.ctx, m)  # (gf)^(i-1)
    while dp[-1] < m:
        d.append(m - rank(pair.f @ P))
        P = T @ P
        dp.append(m - rank(P))
    return KernelProfile(tuple(d), tuple(dp))
