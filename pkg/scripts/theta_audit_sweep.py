"""Audit Theta on every (q, m, n) whose triple space fits under a budget.

    python3 scripts/theta_audit_sweep.py --max-triples 200000
"""

from __future__ import annotations

import argparse
import time

from nilcount.nilpotent_pairs import audit_theta


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--q", type=int, nargs="+", default=[2, 3, 4, 5])
    ap.add_argument("--max-dim", type=int, default=3)
    ap.add_argument("--max-triples", type=int, default=200_000, help="skip tuples with more candidates")
    args = ap.parse_args()

    bad = 0
    print(f"{'q':>3} {'m':>2} {'n':>2} {'triples':>9} {'image':>9} {'injective':>9} {'inverse':>7} {'secs':>6}")
    for q in args.q:
        for m in range(1, args.max_dim + 1):
            for n in range(1, args.max_dim + 1):
                if q ** (2 * m * n + m) > args.max_triples:
                    continue
                t0 = time.perf_counter()
                a = audit_theta(q, m, n)
                ok = a.ok and a.triples == a.hom_size
                bad += not ok
                print(f"{q:>3} {m:>2} {n:>2} {a.triples:>9} {a.image_size:>9} {str(a.injective):>9} "
                      f"{a.roundtrip_failures:>7} {time.perf_counter() - t0:>6.2f}{'' if ok else '  FAIL'}")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
