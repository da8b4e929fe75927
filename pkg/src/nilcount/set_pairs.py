"""Eventually constant pairs of set maps and spanning trees of K(m, n).

X = {x_0, ..., x_{m-1}} (red) and Y = {y_0, ..., y_{n-1}} (black) are
0-indexed here; the CLI prints them 1-indexed.  An undirected edge of
K(m, n) is the tuple ``(x, y)``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator

from ._parallel import sharded_map
from .errors import EdgeNotInTree, NotEventuallyConstant, TooLarge

Edge = tuple[int, int]

ENUM_CAP = 10**8
TREE_ORACLE_MAX_VERTICES = 9


@dataclass(frozen=True)
class SetPair:
    m: int
    n: int
    f: tuple[int, ...]  # X -> Y
    g: tuple[int, ...]  # Y -> X

    def __post_init__(self):
        if len(self.f) != self.m or len(self.g) != self.n:
            raise ValueError("f must have length m and g length n")
        if any(not 0 <= y < self.n for y in self.f) or any(not 0 <= x < self.m for x in self.g):
            raise ValueError("values out of range")

    def gf(self) -> tuple[int, ...]:
        return tuple(self.g[y] for y in self.f)


@dataclass(frozen=True)
class BipartiteDigraph:
    """Functional digraph: red x -> black edges_xy[x], black y -> red edges_yx[y]."""

    m: int
    n: int
    edges_xy: tuple[int, ...]
    edges_yx: tuple[int, ...]

    def cycles(self) -> list[list[tuple[str, int]]]:
        """Every directed cycle, each listed from its least red vertex."""
        seen: set[int] = set()
        out = []
        for start in range(self.m):
            if start in seen:
                continue
            path: dict[int, int] = {}
            x = start
            while x not in path and x not in seen:
                path[x] = len(path)
                x = self.edges_yx[self.edges_xy[x]]
            if x in path:
                cyc_x = [v for v, pos in sorted(path.items(), key=lambda t: t[1]) if pos >= path[x]]
                first = cyc_x.index(min(cyc_x))
                cyc_x = cyc_x[first:] + cyc_x[:first]
                cycle = []
                for v in cyc_x:
                    cycle += [("x", v), ("y", self.edges_xy[v])]
                out.append(cycle)
            seen.update(path)
        return out


@dataclass(frozen=True)
class SpanningTree:
    m: int
    n: int
    edges: frozenset[Edge]

    def __post_init__(self):
        if len(self.edges) != self.m + self.n - 1 or not _connected(self.m, self.n, self.edges):
            raise ValueError("edges do not form a spanning tree of K(m, n)")


def _connected(m: int, n: int, edges) -> bool:
    parent = list(range(m + n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    components = m + n
    for x, y in edges:
        a, b = find(x), find(m + y)
        if a != b:
            parent[a] = b
            components -= 1
    return components == 1


def is_eventually_constant(p: SetPair) -> bool:
    """(gf)^m is constant; the image chain of gf stabilises within m steps."""
    h = p.gf()
    image = set(range(p.m))
    for _ in range(p.m):
        image = {h[x] for x in image}
    return len(image) == 1


def gamma(p: SetPair) -> BipartiteDigraph:
    return BipartiteDigraph(p.m, p.n, p.f, p.g)


def phi(G: BipartiteDigraph) -> tuple[SpanningTree, Edge]:
    """Forget orientations and merge the doubled 2-cycle edge; that edge is marked."""
    cycles = G.cycles()
    if len(cycles) != 1 or len(cycles[0]) != 2:
        lengths = sorted(len(c) for c in cycles)
        raise NotEventuallyConstant(f"expected a single 2-cycle, found cycles of lengths {lengths}")
    (_, x0), (_, y0) = cycles[0]
    edges = {(x, G.edges_xy[x]) for x in range(G.m)} | {(G.edges_yx[y], y) for y in range(G.n)}
    return SpanningTree(G.m, G.n, frozenset(edges)), (x0, y0)


def phi_preimage(T: SpanningTree, e: Edge) -> SetPair:
    """Orient both halves of T - e toward the endpoints of e; double e into a 2-cycle."""
    if e not in T.edges:
        raise EdgeNotInTree(f"{e} is not an edge of the tree")
    m, n = T.m, T.n
    adj: dict[tuple[str, int], list[tuple[str, int]]] = {}
    for x, y in T.edges:
        if (x, y) == e:
            continue
        adj.setdefault(("x", x), []).append(("y", y))
        adj.setdefault(("y", y), []).append(("x", x))
    x0, y0 = e
    f = [None] * m
    g = [None] * n
    f[x0], g[y0] = y0, x0
    for root in (("x", x0), ("y", y0)):
        queue, seen = deque([root]), {root}
        while queue:
            node = queue.popleft()
            for nb in adj.get(node, ()):
                if nb in seen:
                    continue
                seen.add(nb)
                side, idx = nb
                if side == "x":
                    f[idx] = node[1]
                else:
                    g[idx] = node[1]
                queue.append(nb)
    return SetPair(m, n, tuple(f), tuple(g))


def all_pairs(m: int, n: int) -> Iterator[SetPair]:
    """Every pair, lexicographic in (f, g)."""
    for f in product(range(n), repeat=m):
        for g in product(range(m), repeat=n):
            yield SetPair(m, n, f, g)


def _count_for_f(args: tuple[int, int, tuple[int, ...]]) -> int:
    m, n, f = args
    return sum(is_eventually_constant(SetPair(m, n, f, g)) for g in product(range(m), repeat=n))


def enumerate_eventually_constant(m: int, n: int, workers: int | None = None, cap: int = ENUM_CAP) -> int:
    """Brute-force |P(m, n)|, sharded over the choice of f."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    if m**n * n**m > cap:
        raise TooLarge(f"{m**n * n**m} pairs exceed the cap {cap}")
    shards = [(m, n, f) for f in product(range(n), repeat=m)]
    return sum(sharded_map(_count_for_f, shards, workers))


def spanning_trees(m: int, n: int) -> Iterator[SpanningTree]:
    """All spanning trees of K(m, n) by filtering (m+n-1)-edge subsets."""
    all_edges = [(x, y) for x in range(m) for y in range(n)]
    for subset in combinations(all_edges, m + n - 1):
        if _connected(m, n, subset):
            yield SpanningTree(m, n, frozenset(subset))


def count_spanning_trees_bruteforce(m: int, n: int) -> int:
    if m + n > TREE_ORACLE_MAX_VERTICES:
        raise TooLarge(f"K({m},{n}) is beyond the exhaustive oracle (m+n <= {TREE_ORACLE_MAX_VERTICES})")
    return sum(1 for _ in spanning_trees(m, n))


def spanning_trees_kmn(m: int, n: int) -> int:
    """Spanning-tree count of K(m, n); cross-checked by enumeration when m+n <= 9."""
    formula = m ** (n - 1) * n ** (m - 1)
    if m + n <= TREE_ORACLE_MAX_VERTICES:
        brute = count_spanning_trees_bruteforce(m, n)
        if brute != formula:
            raise AssertionError(f"K({m},{n}): enumeration {brute} != formula {formula}")
    return formula
