"""Command-line surface: verdicts, certified sums, searches, golden tables.

Subcommands
    check    k-freeness mod b of a digit set, with witness and certificate
    hsum     certified harmonic sum of a shifted Kempner set
    search   branch-and-bound sweep emitting JSONL result rows
    tables   recompute the golden reference tables and compare
    csv      convert a JSONL result file to CSV

Result rows are JSON objects (schema_version 1) with keys k, b, digits,
estimate, hsum, hsum_error, density, mode, timestamp; hsum fields stay
null until a row has been rescored.  stdout carries data only; all
diagnostics go to stderr.  KEMPNER_EPSILON overrides the default
certified precision, and SOURCE_DATE_EPOCH pins row timestamps for
byte-reproducible runs.
"""

from __future__ import annotations

import argparse
import csv as _csv
import datetime as _dt
import json
import math
import os
import sys
from typing import Iterable

from .golden import (
    COMPOSITE_ANCHORS,
    COMPOSITE_TOLERANCE,
    SUM_TOLERANCE,
    TABLE_3FREE,
    TABLE_4FREE,
    TABLE_4FREE_LARGE,
    TABLE_DENSITY,
)
from .harmonic import (
    PrecisionConfig,
    PrecisionError,
    harmonic_number,
    harmonic_sum_shifted,
    quick_estimate,
)
from .progressions import ResidueSet, find_ap_witness
from .search import (
    CandidateRecord,
    SearchBudgetExceeded,
    SearchConfig,
    checkpoint_meta,
    rescore,
    run_search,
)
from .sets import KempnerSpec, kfree_certificate, log_density

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_PRECISION = 3
EXIT_BUDGET = 4


def _parse_digits(text: str) -> tuple[int, ...]:
    try:
        digits = tuple(int(part) for part in text.split(",") if part.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed digit list {text!r}")
    if not digits:
        raise argparse.ArgumentTypeError("digit list must not be empty")
    if len(set(digits)) != len(digits):
        raise argparse.ArgumentTypeError(f"digit list {text!r} has duplicates")
    return tuple(sorted(digits))


def _parse_bases(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return int(lo), int(hi)
        single = int(text)
        return single, single
    except ValueError:
        raise argparse.ArgumentTypeError(f"bases must look like LO..HI, got {text!r}")


def _default_epsilon() -> float:
    raw = os.environ.get("KEMPNER_EPSILON")
    if raw is None:
        return 1e-9
    try:
        eps = float(raw)
    except ValueError:
        raise SystemExit(f"KEMPNER_EPSILON={raw!r} is not a number")
    return eps


def _run_timestamp() -> str:
    raw = os.environ.get("SOURCE_DATE_EPOCH")
    if raw is not None:
        moment = _dt.datetime.fromtimestamp(int(raw), _dt.timezone.utc)
    else:
        moment = _dt.datetime.now(_dt.timezone.utc)
    return moment.replace(microsecond=0).isoformat().replace("+00:00", "Z")


def result_row(rec: CandidateRecord, mode: str, timestamp: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "k": rec.k,
        "b": rec.b,
        "digits": list(rec.digits),
        "estimate": rec.estimate,
        "hsum": rec.certified.value if rec.certified else None,
        "hsum_error": rec.certified.error_bound if rec.certified else None,
        "density": rec.density,
        "mode": mode,
        "timestamp": timestamp,
    }


def _dump_row(row: dict) -> str:
    return json.dumps(row, sort_keys=True)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_check(args) -> int:
    try:
        S = ResidueSet(args.b, args.digits)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    witness = find_ap_witness(S, args.k)
    print(f"kfree-mod-b: {'true' if witness is None else 'false'}")
    if witness is not None:
        residues = ",".join(str(r) for r in witness.residues(S.b))
        print(
            f"witness: start={witness.start} diff={witness.diff} "
            f"length={witness.length} residues={residues}"
        )
    certificate = (
        S.b >= 3
        and len(S) < S.b
        and 0 in S.members
        and witness is None
    )
    print(f"certificate: {'true' if certificate else 'false'}")
    if witness is not None:
        print("note: the mod-b test is sufficient, not necessary; "
              "the digit-restricted set may still avoid k-term progressions")
    return EXIT_OK if certificate else EXIT_FALSE


def _cmd_hsum(args) -> int:
    try:
        S = ResidueSet(args.b, args.digits)
        cfg = PrecisionConfig(target_abs_error=args.epsilon)
        cert = harmonic_sum_shifted(S, args.shift, cfg)
    except PrecisionError as exc:
        print(f"precision not reached: {exc}", file=sys.stderr)
        print(
            f"best value {exc.best.value!r} with bound {exc.best.error_bound:.3e}",
            file=sys.stderr,
        )
        return EXIT_PRECISION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"{cert.value:.5f} ± {cert.error_bound:.1e}")
    return EXIT_OK


def _search_config(args) -> SearchConfig:
    mode = args.mode
    kwargs: dict = {}
    if mode == "full":
        pass
    elif mode.startswith("root="):
        kwargs["root_prefix"] = _parse_digits(mode[len("root=") :])
        mode = "root"
    elif mode.startswith("greedy-dev="):
        kwargs["deviation_budget"] = int(mode[len("greedy-dev=") :])
        mode = "greedy-dev"
    elif mode.startswith("caps="):
        kwargs["caps"] = _parse_digits(mode[len("caps=") :])
        mode = "caps"
    else:
        raise argparse.ArgumentTypeError(f"unknown mode {args.mode!r}")
    return SearchConfig(
        k=args.k,
        bases=args.bases,
        threshold=args.threshold,
        mode=mode,
        objective=args.objective,
        require_zero=args.require_zero,
        emit_top=args.top,
        **kwargs,
    )


def _print_top_table(records: list[CandidateRecord], objective: str, out) -> None:
    if objective == "density":
        print(f"{'rank':>4}  {'density':>8}  {'k':>3}  {'b':>4}  S", file=out)
        for rank, rec in enumerate(records, 1):
            digits = "{" + ",".join(map(str, rec.digits)) + "}"
            print(
                f"{rank:>4}  {rec.density:8.5f}  {rec.k:>3}  {rec.b:>4}  {digits}",
                file=out,
            )
        return
    print(f"{'rank':>4}  {'H(K+1)':>8}  {'b':>4}  S", file=out)
    for rank, rec in enumerate(records, 1):
        shown = f"{rec.certified.value:8.5f}" if rec.certified else "   n/a  "
        digits = "{" + ",".join(map(str, rec.digits)) + "}"
        print(f"{rank:>4}  {shown}  {rec.b:>4}  {digits}", file=out)


def _cmd_search(args) -> int:
    try:
        cfg = _search_config(args)
    except (argparse.ArgumentTypeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    timestamp = _run_timestamp()
    if args.resume and args.checkpoint and os.path.exists(args.checkpoint):
        timestamp = checkpoint_meta(args.checkpoint).get("timestamp", timestamp)
    sink = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    collected: list[CandidateRecord] = []
    try:
        stream = run_search(
            cfg,
            workers=args.workers,
            checkpoint=args.checkpoint,
            resume=args.resume,
            meta={"timestamp": timestamp},
        )
        for rec in stream:
            sink.write(_dump_row(result_row(rec, cfg.mode, timestamp)) + "\n")
            if args.top:
                collected.append(rec)
    except SearchBudgetExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    finally:
        if sink is not sys.stdout:
            sink.close()
    if args.top:
        precision = PrecisionConfig(target_abs_error=args.epsilon)
        ranked = rescore(collected, precision)
        if cfg.objective == "density":
            ranked = sorted(collected, key=lambda r: (-r.density, r.b, r.digits))
        _print_top_table(ranked[: args.top], cfg.objective, sys.stdout)
    return EXIT_OK


def _iter_table_checks(which: str, precision: PrecisionConfig):
    """Yield (table, row_label, computed, expected, tolerance) tuples."""
    if which in ("1", "all"):
        for i, row in enumerate(TABLE_3FREE, 1):
            got = harmonic_sum_shifted(ResidueSet(row.b, row.digits), 1, precision)
            yield "1", f"row {i} b={row.b}", got.value, row.hsum, SUM_TOLERANCE
    if which in ("2", "all"):
        for i, row in enumerate(TABLE_4FREE, 1):
            got = harmonic_sum_shifted(ResidueSet(row.b, row.digits), 1, precision)
            yield "2", f"row {i} b={row.b}", got.value, row.hsum, SUM_TOLERANCE
    if which in ("3", "all"):
        for i, row in enumerate(TABLE_4FREE_LARGE, 1):
            got = harmonic_sum_shifted(ResidueSet(row.b, row.digits), 1, precision)
            yield "3", f"row {i} b={row.b}", got.value, row.hsum, SUM_TOLERANCE
    if which in ("4", "all"):
        for i, row in enumerate(TABLE_DENSITY, 1):
            got = log_density(KempnerSpec(ResidueSet(row.b, row.digits)))
            yield "4", f"row {i} k={row.k} b={row.b}", got, row.density, SUM_TOLERANCE
    if which in ("composite", "all"):
        for anchor in COMPOSITE_ANCHORS:
            part = harmonic_sum_shifted(
                ResidueSet(anchor.b, anchor.digits), anchor.head + 1, precision
            )
            got = harmonic_number(anchor.head) + part.value
            yield (
                "composite",
                anchor.label,
                got,
                anchor.value,
                COMPOSITE_TOLERANCE,
            )


def _cmd_tables(args) -> int:
    precision = PrecisionConfig(target_abs_error=args.epsilon)
    passed = failed = 0
    for table, label, got, expected, tol in _iter_table_checks(args.which, precision):
        ok = abs(got - expected) <= tol
        passed += ok
        failed += not ok
        verdict = "PASS" if ok else "FAIL"
        print(f"table {table} {label}: computed {got:.5f} expected {expected:.5f} {verdict}")
    print(f"{passed}/{passed + failed} match")
    return EXIT_OK if failed == 0 else EXIT_FALSE


def _cmd_csv(args) -> int:
    fields = [
        "schema_version", "k", "b", "digits", "estimate",
        "hsum", "hsum_error", "density", "mode", "timestamp",
    ]
    try:
        with open(args.infile, encoding="utf-8") as src, open(
            args.outfile, "w", encoding="utf-8", newline=""
        ) as dst:
            writer = _csv.DictWriter(dst, fieldnames=fields)
            writer.writeheader()
            for line in src:
                line = line.strip()
                if not line:
                    continue
                row = json.loads(line)
                row["digits"] = ",".join(str(d) for d in row["digits"])
                writer.writerow({key: row.get(key) for key in fields})
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kempner",
        description="Digit-restricted sets without k-term progressions: "
        "verdicts, certified harmonic sums, branch-and-bound search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="k-freeness mod b of a digit set")
    p.add_argument("--b", type=int, required=True, help="base")
    p.add_argument("--k", type=int, required=True, help="progression length")
    p.add_argument("--digits", type=_parse_digits, required=True,
                   help="comma-separated digit set, e.g. 0,1,2,4,5,7")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("hsum", help="certified harmonic sum of K(S,b)+shift")
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--digits", type=_parse_digits, required=True)
    p.add_argument("--shift", type=int, default=1)
    p.add_argument("--epsilon", type=float, default=_default_epsilon(),
                   help="certified absolute error target (env KEMPNER_EPSILON)")
    p.set_defaults(func=_cmd_hsum)

    p = sub.add_parser("search", help="branch-and-bound sweep over digit sets")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--bases", type=_parse_bases, required=True, metavar="LO..HI")
    p.add_argument("--threshold", type=float, default=-math.inf)
    p.add_argument("--mode", default="full",
                   help="full | root=<digits> | greedy-dev=<n> | caps=<list>")
    p.add_argument("--objective", choices=("hsum", "density"), default="hsum")
    p.add_argument("--top", type=int, default=None,
                   help="rescore survivors and print the top N")
    p.add_argument("--out", default=None, help="JSONL output file (default stdout)")
    p.add_argument("--checkpoint", default=None, help="checkpoint file for long runs")
    p.add_argument("--resume", action="store_true",
                   help="resume from --checkpoint if present")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--require-zero", action=argparse.BooleanOptionalAction,
                   default=True, help="root the search at digit 0")
    p.add_argument("--epsilon", type=float, default=_default_epsilon())
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("tables", help="recompute golden tables and compare")
    p.add_argument("which", choices=("1", "2", "3", "4", "composite", "all"))
    p.add_argument("--epsilon", type=float, default=_default_epsilon())
    p.set_defaults(func=_cmd_tables)

    p = sub.add_parser("csv", help="convert a JSONL result file to CSV")
    p.add_argument("infile")
    p.add_argument("outfile")
    p.set_defaults(func=_cmd_csv)

    return parser


def main(argv: Iterable[str] | None = None) -> int:
    args = build_parser().parse_args(list(argv) if argv is not None else None)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
