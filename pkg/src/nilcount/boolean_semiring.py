"""Boolean-semiring matrices, their digraphs, and nilpotent enumeration.

Over B = {0, 1} with 1 + 1 = 1, a matrix A is nilpotent exactly when the
digraph with an edge j -> i for every A[i][j] = 1 has no directed cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from ._parallel import sharded_map, split_range
from .errors import ShapeMismatch, TooLarge

MAX_ENUM_SIZE = 5
_CHUNK = 1 << 20


@dataclass(frozen=True)
class BoolMatrix:
    """Square Boolean matrix; ``rows[i]`` has bit j set iff A[i][j] = 1."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.n or any(not 0 <= r < (1 << self.n) for r in self.rows):
            raise ShapeMismatch(f"rows do not describe a {self.n}x{self.n} Boolean matrix")

    @classmethod
    def from_lists(cls, grid: Sequence[Sequence[int]]) -> BoolMatrix:
        n = len(grid)
        if any(len(r) != n for r in grid):
            raise ShapeMismatch("Boolean matrices must be square")
        return cls(n, tuple(sum(1 << j for j, x in enumerate(r) if x) for r in grid))

    @classmethod
    def zeros(cls, n: int) -> BoolMatrix:
        return cls(n, (0,) * n)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.rows[i] >> j) & 1

    def __matmul__(self, other: BoolMatrix) -> BoolMatrix:
        return bool_mul(self, other)

    def is_zero(self) -> bool:
        return not any(self.rows)

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.n)] for r in self.rows]


@dataclass(frozen=True)
class Digraph:
    """Directed graph on vertices 1..n."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        for u, v in self.edges:
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge {(u, v)} leaves the vertex set 1..{self.n}")


def bool_mul(A: BoolMatrix, B: BoolMatrix) -> BoolMatrix:
    if A.n != B.n:
        raise ShapeMismatch(f"sizes {A.n} and {B.n} differ")
    out = []
    for r in A.rows:
        acc = 0
        k = 0
        while r:
            if r & 1:
                acc |= B.rows[k]
            r >>= 1
            k += 1
        out.append(acc)
    return BoolMatrix(A.n, tuple(out))


def bool_power(A: BoolMatrix, e: int) -> BoolMatrix:
    result = BoolMatrix(A.n, tuple(1 << i for i in range(A.n)))
    base = A
    while e:
        if e & 1:
            result = result @ base
        base = base @ base
        e >>= 1
    return result


def bool_is_nilpotent(A: BoolMatrix) -> bool:
    return bool_power(A, A.n).is_zero()


def matrix_to_dag(A: BoolMatrix) -> Digraph:
    """A[i][j] = 1 becomes the edge (j+1) -> (i+1)."""
    return Digraph(A.n, frozenset((j + 1, i + 1) for i in range(A.n) for j in range(A.n) if A[i, j]))


def dag_to_matrix(G: Digraph) -> BoolMatrix:
    rows = [0] * G.n
    for u, v in G.edges:
        rows[v - 1] |= 1 << (u - 1)
    return BoolMatrix(G.n, tuple(rows))


def is_dag(G: Digraph) -> bool:
    """Iterative three-colour depth-first search for a directed cycle."""
    succ: dict[int, list[int]] = {v: [] for v in range(1, G.n + 1)}
    for u, v in sorted(G.edges):
        succ[u].append(v)
    WHITE, GREY, BLACK = 0, 1, 2
    colour = dict.fromkeys(succ, WHITE)
    for root in succ:
        if colour[root] != WHITE:
            continue
        colour[root] = GREY
        stack = [(root, iter(succ[root]))]
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[node] = BLACK
                stack.pop()
            elif colour[nxt] == GREY:
                return False
            elif colour[nxt] == WHITE:
                colour[nxt] = GREY
                stack.append((nxt, iter(succ[nxt])))
    return True


# ---------------------------------------------------------------------------
# exhaustive enumeration
# ---------------------------------------------------------------------------
#
# Index idx in [0, 2^(n^2)) encodes the matrix whose row-major entries, read
# as a binary numeral, equal idx.  Increasing idx is lexicographic order.
# Inside the kernel a row is an n-bit integer with column j at bit n-1-j.


def _packed_rows(idx: np.ndarray, n: int) -> list[np.ndarray]:
    mask = (1 << n) - 1
    return [((idx >> (n * (n - 1 - i))) & mask).astype(np.uint8) for i in range(n)]


def _packed_mul(A: list[np.ndarray], B: list[np.ndarray], n: int) -> list[np.ndarray]:
    out = []
    for Ai in A:
        acc = np.zeros_like(Ai)
        for k in range(n):
            acc |= ((Ai >> (n - 1 - k)) & 1) * B[k]
        out.append(acc)
    return out


def _packed_nilpotent_mask(idx: np.ndarray, n: int) -> np.ndarray:
    A = _packed_rows(idx, n)
    result, base, e = None, A, n
    while e:
        if e & 1:
            result = base if result is None else _packed_mul(result, base, n)
        e >>= 1
        if e:
            base = _packed_mul(base, base, n)
    nonzero = np.zeros(idx.shape, dtype=bool)
    for r in result:
        nonzero |= r != 0
    return ~nonzero


def index_to_matrix(idx: int, n: int) -> BoolMatrix:
    grid = [[(idx >> (n * n - 1 - (i * n + j))) & 1 for j in range(n)] for i in range(n)]
    return BoolMatrix.from_lists(grid)


def _scan(args: tuple[int, int, int, bool]) -> tuple[int, np.ndarray | None]:
    n, lo, hi, keep = args
    idx = np.arange(lo, hi, dtype=np.int64)
    mask = _packed_nilpotent_mask(idx, n)
    return int(mask.sum()), (idx[mask] if keep else None)


def enumerate_boolean_nilpotent(
    n: int,
    emit: Callable[[BoolMatrix], None] | None = None,
    workers: int | None = None,
    max_n: int = MAX_ENUM_SIZE,
) -> int:
    """Count the nilpotent n x n Boolean matrices by scanning all 2^(n^2).

    Witnesses are passed to ``emit`` in lexicographic order.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > max_n:
        raise TooLarge(f"n={n} exceeds the enumeration cap {max_n} (2^{n * n} matrices)")
    shards = [(n, lo, hi, emit is not None) for lo, hi in split_range(0, 1 << (n * n), _CHUNK)]
    total = 0
    for count, hits in sharded_map(_scan, shards, workers):
        total += count
        if emit is not None:
            for idx in hits.tolist():
                emit(index_to_matrix(idx, n))
    return total


def nilpotent_matrices(n: int) -> list[BoolMatrix]:
    """All nilpotent n x n Boolean matrices in lexicographic order."""
    out: list[BoolMatrix] = []
    enumerate_boolean_nilpotent(n, emit=out.append, workers=1)
    return out


def all_matrices(n: int) -> Iterable[BoolMatrix]:
    for idx in range(1 << (n * n)):
        yield index_to_matrix(idx, n)
