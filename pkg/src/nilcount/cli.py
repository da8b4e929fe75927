"""``nilcount`` command line.

Exit status: 0 when every requested check agrees, 1 on any disagreement
(a JSON failure record goes to stderr), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, TextIO

from . import exact_counting as ec
from ._parallel import default_workers
from .boolean_semiring import MAX_ENUM_SIZE, enumerate_boolean_nilpotent
from .errors import NotAPrimePower, TooLarge
from .finite_field import check_prime_power
from .nilpotent_pairs import PAIR_CAP, TRIPLE_CAP, audit_theta, enumerate_nilpotent_pairs, pair_stats
from .set_pairs import ENUM_CAP, all_pairs, enumerate_eventually_constant, gamma, is_eventually_constant, phi

SCHEMA_VERSION = 1


@dataclass
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)
    output: str = "text"
    emit: Path | None = None
    workers: int = 1
    force: bool = False


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def write_jsonl(rows: Iterable[dict], out: TextIO) -> int:
    count = 0
    for row in rows:
        out.write(_dumps(row) + "\n")
        count += 1
    return count


def _open_sink(path: Path | None, stdout: TextIO):
    if path is None:
        return stdout, False
    try:
        return path.open("w", encoding="utf-8", newline="\n"), True
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


# ---------------------------------------------------------------------------
# witness tables
# ---------------------------------------------------------------------------


def boolean_rows(n: int, workers: int = 1) -> list[dict]:
    rows: list[dict] = []
    enumerate_boolean_nilpotent(n, emit=lambda A: rows.append({"matrix": A.to_lists()}), workers=workers, max_n=n)
    return rows


def setpair_rows(m: int, n: int) -> list[dict]:
    rows = []
    for p in all_pairs(m, n):
        if not is_eventually_constant(p):
            continue
        tree, (x0, y0) = phi(gamma(p))
        rows.append({
            "f": [y + 1 for y in p.f],
            "g": [x + 1 for x in p.g],
            "tree": sorted([x + 1, y + 1] for x, y in tree.edges),
            "edge": [x0 + 1, y0 + 1],
        })
    return rows


def theta_rows(q: int, m: int, n: int) -> list[dict]:
    return audit_theta(q, m, n, keep_rows=True).rows


def report_tables(config: RunConfig, stdout: TextIO = sys.stdout) -> int:
    """Write the witness table for ``config`` as JSON lines; returns the row count."""
    p = config.params
    if config.subcommand == "boolean":
        rows = boolean_rows(p["n"], config.workers)
    elif config.subcommand == "setpairs":
        rows = setpair_rows(p["m"], p["n"])
    elif config.subcommand == "nilpairs":
        rows = theta_rows(p["q"], p["m"], p["n"])
    else:
        raise ValueError(f"no witness table for {config.subcommand}")
    sink, close = _open_sink(config.emit, stdout)
    try:
        return write_jsonl(rows, sink)
    finally:
        if close:
            sink.close()


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


class UsageError(Exception):
    pass


def _fail(record: dict, stderr: TextIO) -> None:
    stderr.write(_dumps({"schema_version": SCHEMA_VERSION, "failure": record}) + "\n")


def _guard(cost: int, cap: int, force: bool, flag: str, stderr: TextIO) -> None:
    if cost <= cap:
        return
    if not force:
        raise UsageError(f"{flag}: enumeration of {cost:,} items exceeds the cap {cap:,}; pass --force to run anyway")
    stderr.write(f"estimated cost: {cost:,} items (cap {cap:,})\n")


def cmd_boolean(args, stdout: TextIO, stderr: TextIO) -> int:
    n = args.n
    if n < 1:
        raise UsageError("--n: must be >= 1")
    if n > args.max_n:
        if not args.force:
            raise UsageError(f"--n: {n} exceeds the cap {args.max_n} (2^{n * n} matrices); pass --force to run anyway")
        stderr.write(f"estimated cost: 2^{n * n} = {2 ** (n * n):,} matrices\n")
    formula = ec.dag_count_formula(n)
    config = RunConfig("boolean", {"n": n}, emit=args.emit, workers=args.workers)
    if args.emit is not None:
        count = report_tables(config, stdout)
    else:
        count = enumerate_boolean_nilpotent(n, workers=args.workers, max_n=max(n, args.max_n))
    ok = count == formula
    if args.json:
        stdout.write(_dumps({"schema_version": SCHEMA_VERSION, "n": n, "brute_count": count,
                             "formula": formula, "agree": ok}) + "\n")
    else:
        stdout.write(f"{count} / formula {formula} / {'OK' if ok else 'FAIL'}\n")
    if not ok:
        _fail({"params": {"n": n}, "brute_count": count, "formula": formula}, stderr)
    return 0 if ok else 1


def cmd_setpairs(args, stdout: TextIO, stderr: TextIO) -> int:
    m, n = args.m, args.n
    if m < 1 or n < 1:
        raise UsageError("--m/--n: must be >= 1")
    _guard(m**n * n**m, args.cap, args.force, "--m/--n", stderr)
    count = enumerate_eventually_constant(m, n, workers=args.workers, cap=max(args.cap, m**n * n**m))
    formula = ec.eventually_constant_formula(m, n)
    ok = count == formula
    if args.json:
        stdout.write(_dumps({"schema_version": SCHEMA_VERSION, "m": m, "n": n, "brute_count": count,
                             "formula": formula, "agree": ok}) + "\n")
    else:
        stdout.write(f"{count} / formula {formula} / {'OK' if ok else 'FAIL'}\n")
    if args.witness_bijection:
        report_tables(RunConfig("setpairs", {"m": m, "n": n}, emit=args.emit), stdout)
    if not ok:
        _fail({"params": {"m": m, "n": n}, "brute_count": count, "formula": formula}, stderr)
    return 0 if ok else 1


def cmd_nilpairs(args, stdout: TextIO, stderr: TextIO) -> int:
    q, m, n = args.q, args.m, args.n
    try:
        check_prime_power(q)
    except NotAPrimePower as exc:
        raise UsageError(f"--q: {exc}") from None
    if m < 0 or n < 0:
        raise UsageError("--m/--n: must be >= 0")
    need_vectors = args.ell is not None or args.audit_theta
    cost = q ** (2 * m * n) * (q**m if need_vectors else 1)
    _guard(cost, args.cap, args.force, "--q/--m/--n", stderr)
    if args.ell is not None and not 0 <= args.ell <= min(m, n):
        raise UsageError(f"--ell: must lie in [0, {min(m, n)}]")

    stats = pair_stats(q, m, n, with_vectors=need_vectors, workers=args.workers)
    record = {
        "schema_version": SCHEMA_VERSION, "q": q, "m": m, "n": n,
        "brute_count": stats.nilpotent,
        "sum_formula": ec.nilpairs_sum_formula(q, m, n),
        "closed_formula": ec.nilpairs_closed_formula(q, m, n),
    }
    ok = record["brute_count"] == record["sum_formula"] == record["closed_formula"]
    if args.ell is not None:
        record["ell"] = args.ell
        record["brute_ell_count"] = stats.length_hist[args.ell]
        record["ell_formula"] = ec.balanced_triple_formula(q, m, n, args.ell)
        ok &= record["brute_ell_count"] == record["ell_formula"]
    if args.audit_theta:
        audit = audit_theta(q, m, n, keep_rows=args.emit is not None, cap=max(args.cap, cost))
        record["theta"] = {"triples": audit.triples, "image_size": audit.image_size, "hom_size": audit.hom_size,
                           "injective": audit.injective, "full_image": audit.full_image,
                           "inverse_failures": audit.roundtrip_failures}
        ok &= audit.ok and audit.triples == audit.hom_size
        if args.emit is not None:
            sink, _ = _open_sink(args.emit, stdout)
            with sink:
                write_jsonl(audit.rows, sink)
    record["agree"] = bool(ok)
    if args.json:
        stdout.write(_dumps(record) + "\n")
    else:
        stdout.write(f"{record['brute_count']} / sum {record['sum_formula']} / closed {record['closed_formula']}"
                     f" / {'OK' if ok else 'FAIL'}\n")
        if args.ell is not None:
            stdout.write(f"length {args.ell}: {record['brute_ell_count']} / formula {record['ell_formula']}\n")
        if args.audit_theta:
            t = record["theta"]
            stdout.write(f"theta: {t['triples']} triples -> {t['image_size']} of {t['hom_size']} pairs,"
                         f" injective={t['injective']}, inverse failures={t['inverse_failures']}\n")
    if not ok:
        _fail({k: v for k, v in record.items() if k != "schema_version"}, stderr)
    return 0 if ok else 1


_SWEEP_RE = re.compile(r"^(q|m|n)=(\d+)(?:\.\.(\d+))?$")
CHECKS = ("sum_closed", "probability", "length_partition", "rank_partition")


def parse_sweep(spec: str) -> dict[str, list[int]]:
    out = {}
    for part in spec.split(","):
        match = _SWEEP_RE.match(part.strip())
        if not match:
            raise UsageError(f"--sweep: cannot parse {part!r}; expected e.g. q=2..5,m=0..8,n=0..8")
        key, lo, hi = match.group(1), int(match.group(2)), match.group(3)
        hi = int(hi) if hi is not None else lo
        if hi < lo:
            raise UsageError(f"--sweep: empty range in {part!r}")
        out[key] = list(range(lo, hi + 1))
    missing = {"q", "m", "n"} - out.keys()
    if missing:
        raise UsageError(f"--sweep: missing {', '.join(sorted(missing))}")
    return out


def formula_rows(sweep: dict[str, list[int]], checks: list[str]) -> Iterable[dict]:
    for q in sweep["q"]:
        for m in sweep["m"]:
            for n in sweep["n"]:
                hom2 = q ** (2 * m * n)
                s, c = ec.nilpairs_sum_formula(q, m, n), ec.nilpairs_closed_formula(q, m, n)
                prob = ec.nilpotent_pair_probability(q, m, n)
                lengths = sum(ec.balanced_triple_formula(q, m, n, ell) for ell in range(min(m, n) + 1))
                ranks = sum(ec.rank_maps_formula(q, m, n, r) for r in range(min(m, n) + 1))
                row = {"q": q, "m": m, "n": n, "sum_formula": s, "closed_formula": c,
                       "nil_probability": str(prob),
                       "balanced_probability": str(ec.balanced_given_nilpotent_probability(q, m, n)),
                       "length_partition_total": lengths, "rank_partition_total": ranks}
                verdicts = {
                    "sum_closed": s == c,
                    "probability": prob * hom2 == c,
                    "length_partition": lengths == hom2,
                    "rank_partition": ranks == q ** (m * n),
                }
                for name in checks:
                    row[f"check_{name}"] = "pass" if verdicts[name] else "fail"
                yield row


def cmd_formulas(args, stdout: TextIO, stderr: TextIO) -> int:
    sweep = parse_sweep(args.sweep)
    for q in sweep["q"]:
        try:
            check_prime_power(q)
        except NotAPrimePower as exc:
            raise UsageError(f"--sweep: {exc}") from None
    checks = list(CHECKS) if args.check == "all" else [c.strip() for c in args.check.split(",")]
    unknown = [c for c in checks if c not in CHECKS]
    if unknown:
        raise UsageError(f"--check: unknown identity {unknown[0]!r}; choose from all, {', '.join(CHECKS)}")
    rows = list(formula_rows(sweep, checks))
    sink, close = _open_sink(args.out, stdout)
    try:
        fields = list(rows[0].keys())
        writer = csv.DictWriter(sink, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if close:
            sink.close()
    failed = 0
    for row in rows:
        for name in checks:
            if row[f"check_{name}"] == "fail":
                failed += 1
                _fail({"params": {"q": row["q"], "m": row["m"], "n": row["n"]}, "identity": name,
                       "sum_formula": row["sum_formula"], "closed_formula": row["closed_formula"]}, stderr)
    return 1 if failed else 0


def cmd_all(args, stdout: TextIO, stderr: TextIO) -> int:
    from .verify import run_all

    results = run_all()
    for res in results:
        if args.json:
            stdout.write(_dumps({"schema_version": SCHEMA_VERSION, "criterion": res.name, "passed": res.passed,
                                 "elapsed_s": round(res.elapsed_s, 3)}) + "\n")
        else:
            stdout.write(res.line() + "\n")
        for f in res.failures:
            _fail({"criterion": res.name, **f.as_dict()}, stderr)
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nilcount", description="Enumerate and cross-check nilpotent counts.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=None, help="worker processes (default: $NILCOUNT_WORKERS or 1)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--force", action="store_true", help="allow runs beyond the enumeration cap")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("boolean", parents=[common], help="nilpotent Boolean matrices vs the DAG recurrence")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--emit", type=Path, help="write witnesses as JSON lines")
    p.add_argument("--max-n", type=int, default=MAX_ENUM_SIZE)
    p.set_defaults(func=cmd_boolean)

    p = sub.add_parser("setpairs", parents=[common], help="eventually constant pairs vs the tree count")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--witness-bijection", action="store_true", help="dump (pair, tree, marked edge) rows")
    p.add_argument("--emit", type=Path, help="file for the witness rows (default: stdout)")
    p.add_argument("--cap", type=int, default=ENUM_CAP)
    p.set_defaults(func=cmd_setpairs)

    p = sub.add_parser("nilpairs", parents=[common], help="nilpotent pairs over F_q vs both formulas")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ell", type=int, help="also count balanced triples of this length")
    p.add_argument("--audit-theta", action="store_true", help="check Theta is a bijection")
    p.add_argument("--emit", type=Path, help="write Theta audit rows as JSON lines")
    p.add_argument("--cap", type=int, default=min(PAIR_CAP, TRIPLE_CAP))
    p.set_defaults(func=cmd_nilpairs)

    p = sub.add_parser("formulas", parents=[common], help="CSV sweep of the closed-form identities")
    p.add_argument("--sweep", default="q=2..5,m=0..8,n=0..8")
    p.add_argument("--check", default="all")
    p.add_argument("--out", type=Path, help="CSV destination (default: stdout)")
    p.set_defaults(func=cmd_formulas)

    p = sub.add_parser("all", parents=[common], help="run the full acceptance sweep")
    p.set_defaults(func=cmd_all)
    return parser


def run(argv: list[str] | None = None, stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.workers is None:
        try:
            args.workers = default_workers()
        except ValueError:
            stderr.write("nilcount: error: NILCOUNT_WORKERS: must be an integer >= 1\n")
            return 2
    if args.workers < 1:
        stderr.write("nilcount: error: --workers: must be >= 1\n")
        return 2
    try:
        return args.func(args, stdout, stderr)
    except UsageError as exc:
        stderr.write(f"nilcount: error: {exc}\n")
        return 2
    except TooLarge as exc:
        stderr.write(f"nilcount: error: {exc}\n")
        return 2
    except OSError as exc:
        stderr.write(f"nilcount: error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
