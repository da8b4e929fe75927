"""Print every headline number next to its brute-force recount.

    python3 scripts/reproduce_headline_values.py
"""

from __future__ import annotations

from nilcount import exact_counting as ec
from nilcount.boolean_semiring import enumerate_boolean_nilpotent
from nilcount.nilpotent_pairs import enumerate_nilpotent_pairs, pair_stats
from nilcount.set_pairs import enumerate_eventually_constant


def row(label: str, brute, formula) -> bool:
    ok = brute == formula
    print(f"{label:<34} brute={str(brute):>10}  formula={str(formula):>10}  {'OK' if ok else 'FAIL'}")
    return ok


def main() -> int:
    ok = True
    print("# nilpotent Boolean matrices")
    for n in range(1, 6):
        ok &= row(f"a_{n}", enumerate_boolean_nilpotent(n), ec.dag_count_formula(n))
    print(f"{'a_6 (recurrence only)':<34} {ec.dag_count_formula(6)}")

    print("\n# eventually constant pairs")
    for m, n in [(1, 1), (2, 1), (2, 2), (3, 3), (4, 4)]:
        ok &= row(f"|P({m},{n})|", enumerate_eventually_constant(m, n), ec.eventually_constant_formula(m, n))

    print("\n# nilpotent pairs over F_q")
    for q, m, n in [(2, 1, 1), (2, 1, 2), (2, 2, 2), (2, 2, 3), (3, 1, 2), (3, 2, 2)]:
        ok &= row(f"N_{{{m},{n}}} q={q}", enumerate_nilpotent_pairs(q, m, n), ec.nilpairs_closed_formula(q, m, n))

    print("\n# balanced triples by length, q=2, m=n=2")
    hist = pair_stats(2, 2, 2).length_hist
    for ell, count in enumerate(hist):
        ok &= row(f"|N(2,2;{ell})|", count, ec.balanced_triple_formula(2, 2, 2, ell))
    ok &= row("sum over lengths", sum(hist), 2**8)
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
