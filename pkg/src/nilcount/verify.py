"""End-to-end checks: every brute-force oracle raced against its formula.

Each ``criterion_*`` function returns a :class:`CheckResult`; the ``all``
CLI subcommand and the acceptance tests both consume them.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable

from . import exact_counting as ec
from .boolean_semiring import enumerate_boolean_nilpotent, nilpotent_matrices
from .finite_field import make_field
from .nilpotent_pairs import (
    audit_theta,
    balanced_count_kernel_formula,
    balanced_vectors,
    enumerate_nilpotent_pairs,
    nilpotent_linear_pairs,
    pair_stats,
    structural_violations,
)
from .set_pairs import (
    all_pairs,
    count_spanning_trees_bruteforce,
    enumerate_eventually_constant,
    gamma,
    is_eventually_constant,
    phi,
    phi_preimage,
    spanning_trees,
)


@dataclass
class Failure:
    params: dict[str, int]
    what: str
    left: Any
    right: Any

    def as_dict(self) -> dict:
        return {"params": self.params, "what": self.what, "left": str(self.left), "right": str(self.right)}


@dataclass
class CheckResult:
    name: str
    budget_s: float
    details: dict[str, Any] = field(default_factory=dict)
    failures: list[Failure] = field(default_factory=list)
    elapsed_s: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def expect(self, params: dict[str, int], what: str, left, right) -> None:
        if left != right:
            self.failures.append(Failure(params, what, left, right))

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name} ({self.elapsed_s:.2f}s, budget {self.budget_s:g}s)"


def _timed(name: str, budget: float):
    def wrap(fn: Callable[[CheckResult], None]) -> Callable[[], CheckResult]:
        def run() -> CheckResult:
            res = CheckResult(name, budget)
            t0 = time.perf_counter()
            fn(res)
            res.elapsed_s = time.perf_counter() - t0
            return res

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


# memoised brute-force counts, shared with the probability check
@lru_cache(maxsize=None)
def eventually_constant_count(m: int, n: int) -> int:
    return enumerate_eventually_constant(m, n)


@lru_cache(maxsize=None)
def nilpotent_pair_count(q: int, m: int, n: int) -> int:
    return enumerate_nilpotent_pairs(q, m, n)


NILPAIR_GRID = [(2, m, n) for m in range(4) for n in range(4) if 2 ** (2 * m * n) <= 2**24] + [
    (3, m, n) for m in range(6) for n in range(6) if m * n <= 5
]
TRIPLE_GRID = [(2, 1, 1), (2, 1, 2), (2, 2, 2), (3, 1, 1), (3, 1, 2)]


@_timed("C1 Boolean nilpotents = DAG recurrence, n=1..5", 60)
def criterion_1(res: CheckResult) -> None:
    for n in range(1, 6):
        brute, formula = enumerate_boolean_nilpotent(n), ec.dag_count_formula(n)
        res.details[n] = brute
        res.expect({"n": n}, "brute vs recurrence", brute, formula)


@_timed("C2 Boolean nilpotents: zero diagonal and antisymmetry, n<=4", 5)
def criterion_2(res: CheckResult) -> None:
    for n in range(1, 5):
        diag = anti = 0
        for A in nilpotent_matrices(n):
            diag += sum(A[i, i] for i in range(n))
            anti += sum(A[i, j] and A[j, i] for i in range(n) for j in range(i + 1, n))
        res.details[n] = {"diagonal": diag, "antisymmetry": anti}
        res.expect({"n": n}, "diagonal violations", diag, 0)
        res.expect({"n": n}, "antisymmetry violations", anti, 0)


@_timed("C3 eventually constant counts, 1<=m,n<=4", 30)
def criterion_3(res: CheckResult) -> None:
    for m in range(1, 5):
        for n in range(1, 5):
            brute = eventually_constant_count(m, n)
            res.details[(m, n)] = brute
            res.expect({"m": m, "n": n}, "brute vs m^(n-1) n^(m-1) (m+n-1)", brute, ec.eventually_constant_formula(m, n))


@_timed("C4 Gamma/Phi bijection and spanning-tree oracle", 30)
def criterion_4(res: CheckResult) -> None:
    for m in range(1, 4):
        for n in range(1, 4):
            p_ = {"m": m, "n": n}
            images: dict = {}
            for p in all_pairs(m, n):
                if not is_eventually_constant(p):
                    continue
                key = phi(gamma(p))
                res.expect(p_, "phi.gamma collision", key in images, False)
                images[key] = p
                res.expect(p_, "preimage(phi(gamma(p))) == p", phi_preimage(*key), p)
            per_tree: dict = {}
            trees = list(spanning_trees(m, n))
            for T in trees:
                for e in sorted(T.edges):
                    res.expect(p_, "phi(gamma(preimage(T, e))) == (T, e)", phi(gamma(phi_preimage(T, e))), (T, e))
            for T, _ in images:
                per_tree[T] = per_tree.get(T, 0) + 1
            res.expect(p_, "trees hit", len(per_tree), len(trees))
            res.expect(p_, "preimages per tree", set(per_tree.values()), {m + n - 1})
            res.details[(m, n)] = {"pairs": len(images), "trees": len(trees)}
    for m in range(1, 6):
        for n in range(1, 7 - m):
            brute = count_spanning_trees_bruteforce(m, n)
            res.expect({"m": m, "n": n}, "tree oracle vs m^(n-1) n^(m-1)", brute, ec.bipartite_spanning_trees(m, n))


@_timed("C5 nilpotent pairs: brute force = sum form = closed form", 300)
def criterion_5(res: CheckResult) -> None:
    for q, m, n in NILPAIR_GRID:
        brute = nilpotent_pair_count(q, m, n)
        p_ = {"q": q, "m": m, "n": n}
        res.details[(q, m, n)] = brute
        res.expect(p_, "brute vs sum formula", brute, ec.nilpairs_sum_formula(q, m, n))
        res.expect(p_, "brute vs closed formula", brute, ec.nilpairs_closed_formula(q, m, n))


@_timed("C6 formula identity sweep and rank partition", 10)
def criterion_6(res: CheckResult) -> None:
    tuples = 0
    for q in (2, 3, 4, 5):
        for m in range(9):
            for n in range(9):
                tuples += 1
                res.expect({"q": q, "m": m, "n": n}, "sum vs closed",
                           ec.nilpairs_sum_formula(q, m, n), ec.nilpairs_closed_formula(q, m, n))
    for q in (2, 3):
        for m in range(7):
            for n in range(7):
                total = sum(ec.rank_maps_formula(q, m, n, r) for r in range(min(m, n) + 1))
                res.expect({"q": q, "m": m, "n": n}, "sum of rank counts vs q^(mn)", total, q ** (m * n))
    res.details["tuples"] = tuples


@_timed("C7 balanced triples = q^(2mn) and Theta audit", 120)
def criterion_7(res: CheckResult) -> None:
    for q, m, n in TRIPLE_GRID:
        p_ = {"q": q, "m": m, "n": n}
        triples = sum(pair_stats(q, m, n).length_hist)
        audit = audit_theta(q, m, n)
        res.expect(p_, "balanced triples vs q^(2mn)", triples, q ** (2 * m * n))
        res.expect(p_, "theta collisions", audit.collisions, 0)
        res.expect(p_, "theta image size vs q^(2mn)", audit.image_size, audit.hom_size)
        res.expect(p_, "theta inverse failures", audit.roundtrip_failures, 0)
        res.details[(q, m, n)] = {"triples": triples, "image": audit.image_size}


@_timed("C8 length partition of balanced triples", 120)
def criterion_8(res: CheckResult) -> None:
    for q, m, n in TRIPLE_GRID:
        hist = pair_stats(q, m, n).length_hist
        res.expect({"q": q, "m": m, "n": n}, "sum over lengths vs q^(2mn)", sum(hist), q ** (2 * m * n))
        for ell, count in enumerate(hist):
            res.expect({"q": q, "m": m, "n": n, "ell": ell}, "length slice vs formula",
                       count, ec.balanced_triple_formula(q, m, n, ell))
        res.details[(q, m, n)] = hist


@_timed("C9 balanced-vector identities and structural facts", 120)
def criterion_9(res: CheckResult) -> None:
    ctx = make_field(2)
    for m in range(3):
        for n in range(3):
            violations = {}
            for pair in nilpotent_linear_pairs(ctx, m, n):
                p_ = {"q": 2, "m": m, "n": n}
                res.expect(p_, "kernel formula vs direct balanced count",
                           balanced_count_kernel_formula(pair), len(balanced_vectors(pair)))
                for k, v in structural_violations(pair).items():
                    violations[k] = violations.get(k, 0) + v
            for k, v in violations.items():
                res.expect({"q": 2, "m": m, "n": n}, f"structural fact {k}", v, 0)
    for m, n in [(1, 1), (1, 2), (2, 2)]:
        q = 2
        s = pair_stats(q, m, n)
        hom2 = q ** (2 * m * n)
        p_ = {"q": q, "m": m, "n": n}
        res.expect(p_, "|(f,g,v_b,w)| + |(f,g,v,w_b)| vs q^(2mn)(q^m+q^n)",
                   s.v_balanced * q**n + s.w_balanced * q**m, hom2 * (q**m + q**n))
        res.expect(p_, "|(f,g,v_b,w_b)| vs |(f,g,v_u,w_u)| + q^(2mn)", s.both_balanced, s.both_unbalanced + hom2)
        res.details[(m, n)] = {"bb": s.both_balanced, "uu": s.both_unbalanced}


@_timed("C10 exact probabilities and limit residuals", 1)
def criterion_10(res: CheckResult) -> None:
    for m in range(1, 5):
        for n in range(1, 5):
            prob = Fraction(eventually_constant_count(m, n), m**n * n**m)
            res.expect({"m": m, "n": n}, "eventually constant probability",
                       prob, ec.eventually_constant_probability(m, n))
    for q, m, n in NILPAIR_GRID:
        prob = Fraction(nilpotent_pair_count(q, m, n), q ** (2 * m * n))
        res.expect({"q": q, "m": m, "n": n}, "nilpotent pair probability", prob, ec.nilpotent_pair_probability(q, m, n))
    for q in (2, 3):
        for m in range(4):
            audit = ec.limit_audit(q, m, 30)
            res.expect({"q": q, "m": m}, "limit audit failures", audit.failures, [])


CRITERIA = [
    criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
    criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
]


def run_all() -> list[CheckResult]:
    return [c() for c in CRITERIA]
