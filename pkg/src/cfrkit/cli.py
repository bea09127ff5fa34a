"""Command-line front end.

Subcommands:

  verify-design   validity plus replication-bound and locality diagnostics
  build           run one of the three constructions and write the array
  skipcost        per-column repair plans and the array skip cost
  randomize       seeded search for a zero skip-cost ordering
  report          expansion-factor tables (asymptotic and per-design)

Exit codes: 0 success, 1 verification failure or oracle mismatch, 2 search
exhaustion, 64 usage errors, 65 data/parameter errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from .constructions import (
    ConstructionError,
    RecursiveParams,
    asymptotic_expansion,
    construct_combination,
    construct_duplicate,
    construct_recursive,
    predict_recursive_size,
)
from .designs import (
    CoveringDesign,
    DesignError,
    DesignParams,
    is_properly_local,
    load_design,
    min_blocks_bound,
    replication_bound,
    verify_covering,
)
from .randomizer import SearchConfig, Strategy, search_zero_skip
from .skipcost import (
    ArrayFormatError,
    CapacityError,
    build_report,
    brute_force_column_repair_cost,
    column_repair_cost,
    default_locality,
    expansion_factor,
    format_ratio,
    parse_array,
    serialize_array,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_EXHAUSTED = 2
EXIT_USAGE = 64
EXIT_DATA = 65

# Smallest published covering-design sizes for the parameter families the
# reports compare against (public covering-design repository snapshot).
KNOWN_SIZES = {
    (5, 6, 6): 1, (5, 6, 7): 6, (5, 6, 8): 12, (5, 6, 9): 30, (5, 6, 10): 50,
    (5, 6, 11): 100, (5, 6, 12): 132, (5, 6, 13): 245, (5, 6, 14): 371,
    (5, 6, 16): 808, (5, 6, 18): 1530, (5, 6, 20): 2800, (5, 6, 22): 4659,
    (5, 6, 24): 7084, (5, 6, 26): 11544,
    (4, 6, 12): 40, (4, 6, 14): 80, (4, 6, 16): 152, (4, 6, 18): 236,
    (4, 6, 20): 382, (4, 6, 22): 580, (4, 6, 24): 784, (4, 6, 26): 1152,
}

DEFAULT_TABLE1_PAIRS = "3,4 4,5 4,6 5,6 5,7 5,8 6,7 6,8 6,9 6,10"


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors must not collide with exit code 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="cfrkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify-design", help="check the covering property and bounds")
    p.add_argument("--design", required=True, type=Path)
    p.add_argument("--t", required=True, type=int)
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--v", required=True, type=int)

    p = sub.add_parser("build", help="run a construction and write the array")
    p.add_argument("--method", required=True, choices=["dup", "comb", "rec"])
    p.add_argument("--design", required=True, type=Path)
    p.add_argument("--design2", type=Path, help="strength-(t-1) design, for comb")
    p.add_argument("--t", required=True, type=int)
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--v", required=True, type=int)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--locality", type=int, help="override the method's locality")
    p.add_argument("--csv", action="store_true", help="report as CSV")

    p = sub.add_parser("skipcost", help="per-column repair plans and cost")
    p.add_argument("--array", required=True, type=Path)
    p.add_argument("--locality", type=int)
    p.add_argument("--t", type=int, help="derive locality as ceil(k/(t-1))")
    p.add_argument("--oracle", action="store_true", help="cross-check the brute-force solver")
    p.add_argument("--csv", action="store_true")

    p = sub.add_parser("randomize", help="search random orderings for zero skip cost")
    p.add_argument("--design", required=True, type=Path)
    p.add_argument("--t", required=True, type=int)
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--v", required=True, type=int)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--max-trials", required=True, type=int)
    p.add_argument("--strategy", choices=["global", "local"], default="global")
    p.add_argument("--locality", type=int)
    p.add_argument("--out", required=True, type=Path)
    p.add_argument("--log", type=Path, help="JSON-lines trial log")

    p = sub.add_parser("report", help="expansion-factor tables")
    p.add_argument("--table", required=True, choices=["1", "3"])
    p.add_argument("--pairs", default=DEFAULT_TABLE1_PAIRS,
                   help="t,k pairs for table 1, space-separated")
    p.add_argument("--t", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--v", type=int, help="point count of the resulting code")
    p.add_argument("--design", type=Path, help="(t,k,v) design, constructions 1 and 2")
    p.add_argument("--design2", type=Path, help="(t-1,k,v) design, construction 2")
    p.add_argument("--rec-base", type=Path, help="(t,k,v/q) design, construction 3")
    p.add_argument("--exact", action="store_true", help="append exact rationals")
    return parser


def _cmd_verify_design(args) -> int:
    params = DesignParams(args.t, args.k, args.v)
    design = load_design(args.design, params)
    uncovered = verify_covering(design)
    print(f"design: {design.num_blocks} blocks over [1, {params.v}], "
          f"strength {params.t}, block size {params.k}")
    bound = min_blocks_bound(params)
    print(f"minimum block count: {bound} (have {design.num_blocks})")
    for s in range(1, params.t + 1):
        r_s = replication_bound(params, s)
        print(f"replication bound r_{s}: {r_s}")
    if params.t >= 2:
        loc = is_properly_local(params)
        print(f"properly local: {'yes' if loc.ok else 'no'} "
              f"(guaranteed {loc.replication_floor} blocks per (t-1)-subset, "
              f"threshold {loc.threshold})")
    if uncovered:
        print(f"INVALID: {len(uncovered)} uncovered {params.t}-subsets, "
              f"first {uncovered[0]}")
        return EXIT_INVALID
    print("VALID: every t-subset is covered")
    return EXIT_OK


def _cmd_build(args) -> int:
    params = DesignParams(args.t, args.k, args.v)
    design = load_design(args.design, params)
    if args.method == "dup":
        array = construct_duplicate(design)
        report_params, locality = params, 1
    elif args.method == "comb":
        if args.design2 is None:
            print("build comb needs --design2", file=sys.stderr)
            return EXIT_USAGE
        params2 = DesignParams(args.t - 1, args.k, args.v)
        design2 = load_design(args.design2, params2)
        array = construct_combination(design, design2)
        report_params, locality = params, default_locality(params)
    else:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            array, prediction = construct_recursive(design)
        for w in caught:
            print(f"note: {w.message}", file=sys.stderr)
        q = RecursiveParams.from_params(args.t, args.k).q
        report_params = DesignParams(args.t, args.k, q * args.v)
        locality = default_locality(params)
        print(f"predicted blocks: {prediction.predicted_blocks} "
              f"(coefficient {prediction.coefficient}, case {prediction.case.value})")
    if args.locality is not None:
        locality = args.locality
    args.out.write_text(serialize_array(array), encoding="utf-8")
    print(f"wrote {array.k}x{array.n} array over [1, {array.v}] to {args.out}")
    report = build_report(array, report_params, locality)
    print(report.to_csv() if args.csv else report.to_text(), end="")
    return EXIT_OK


def _resolve_locality(args, k: int) -> int | None:
    if args.locality is not None:
        return args.locality
    if args.t is not None:
        return default_locality(DesignParams(args.t, k, max(k, args.t)))
    return None


def _cmd_skipcost(args) -> int:
    array = parse_array(args.array.read_text(encoding="utf-8"))
    locality = _resolve_locality(args, array.k)
    if locality is None:
        print("skipcost needs --locality or --t", file=sys.stderr)
        return EXIT_USAGE
    print(f"array: k={array.k} N={array.n} v={array.v}, locality {locality}")
    worst: int | None = 0
    mismatches = 0
    lines = []
    for j in range(1, array.n + 1):
        plan = column_repair_cost(array, j, locality)
        cost = None if plan is None else plan.total_cost
        if args.oracle:
            oracle = brute_force_column_repair_cost(array, j, locality)
            if oracle != cost:
                mismatches += 1
                lines.append(f"column {j}: MISMATCH solver={cost} oracle={oracle}")
                continue
        if plan is None:
            worst = None
            lines.append(f"column {j}: infeasible")
            continue
        detail = "; ".join(
            f"rows {list(t.rows)} from column {t.helper}" for t in plan.transmissions
        )
        lines.append(f"column {j}: cost {cost} ({detail})")
        if worst is not None:
            worst = max(worst, cost)
    if args.csv:
        print("column,cost")
        for j, line in enumerate(lines, start=1):
            cost = line.split(":")[1].strip().split()[0]
            print(f"{j},{'' if cost == 'infeasible' else cost}")
    else:
        for line in lines:
            print(line)
    print(f"cost(A) = {worst if worst is not None else 'infeasible'}")
    if args.oracle:
        print(f"oracle check: {'ok' if mismatches == 0 else f'{mismatches} mismatches'}")
        if mismatches:
            return EXIT_INVALID
    return EXIT_OK


def _cmd_randomize(args) -> int:
    params = DesignParams(args.t, args.k, args.v)
    design = load_design(args.design, params)
    if design.has_duplicate_blocks():
        deduped = tuple(dict.fromkeys(design.blocks))
        print(f"note: removed {design.num_blocks - len(deduped)} duplicate blocks",
              file=sys.stderr)
        design = CoveringDesign(params, deduped)
    locality = args.locality if args.locality is not None else default_locality(params)
    config = SearchConfig(
        seed=args.seed,
        max_trials=args.max_trials,
        locality=locality,
        strategy=Strategy.LOCAL_REPAIR if args.strategy == "local" else Strategy.GLOBAL_RESHUFFLE,
    )
    outcome = search_zero_skip(design, config)
    if args.log is not None:
        with open(args.log, "w", encoding="utf-8") as fh:
            for trial, failing in outcome.trial_log:
                fh.write(json.dumps({"trial": trial, "failing_columns": failing}) + "\n")
    if not outcome.success:
        print(f"exhausted after {outcome.trials_used} trials; "
              f"{len(outcome.failing_columns)} columns still failing "
              f"(first: {outcome.failing_columns[:5]})")
        return EXIT_EXHAUSTED
    args.out.write_text(serialize_array(outcome.array), encoding="utf-8")
    xi = expansion_factor(outcome.array.n, params)
    print(f"success after {outcome.trials_used} trials; wrote {args.out}")
    print(f"expansion factor: {format_ratio(xi)} ({xi})")
    return EXIT_OK


def _table1(args) -> int:
    try:
        pairs = [tuple(int(x) for x in tok.split(",")) for tok in args.pairs.split()]
    except ValueError:
        print(f"bad --pairs value {args.pairs!r}", file=sys.stderr)
        return EXIT_USAGE
    print("(t,k)  asymptotic expansion factor")
    for t, k in pairs:
        xi = asymptotic_expansion(t, k)
        extra = f"  = {format_ratio(xi)}" if args.exact else ""
        print(f"({t},{k})  {xi}{extra}")
    return EXIT_OK


def _footnote(t: int, k: int, v: int, have: int) -> str:
    known = KNOWN_SIZES.get((t, k, v))
    if known is not None and known != have:
        return f"  [note: input has {have} blocks; smallest published is {known}]"
    return ""


def _table3(args) -> int:
    if args.t is None or args.k is None or args.v is None:
        print("report --table 3 needs --t, --k and --v", file=sys.stderr)
        return EXIT_USAGE
    if args.design is None and args.rec_base is None:
        print("report --table 3 needs --design and/or --rec-base", file=sys.stderr)
        return EXIT_USAGE
    t, k, v = args.t, args.k, args.v
    params = DesignParams(t, k, v)
    denom = Fraction(1) / min_blocks_bound(params)  # C(k,t)/C(v,t)

    def emit(label: str, xi: Fraction, note: str) -> None:
        extra = f" ({xi})" if args.exact else ""
        print(f"{label}: {format_ratio(xi)}{extra}{note}")

    print(f"expansion factors for (t,k)=({t},{k}) codes on [1, {v}]")
    if args.design is not None:
        design = load_design(args.design, params)
        note = _footnote(t, k, v, design.num_blocks)
        emit("construction 1 (duplicate)", 2 * design.num_blocks * denom, note)
        if args.design2 is not None:
            design2 = load_design(args.design2, DesignParams(t - 1, k, v))
            r = RecursiveParams.from_params(t, k).r
            copies = math.comb(k, t - 1)
            if 2 <= r <= t - 2:
                copies += math.comb(k, r)
            n = design.num_blocks + copies * design2.num_blocks
            note2 = _footnote(t - 1, k, v, design2.num_blocks)
            emit("construction 2 (combination)", n * denom, note2)
    if args.rec_base is not None:
        q = RecursiveParams.from_params(t, k).q
        if v % q != 0:
            print(f"construction 3 needs v divisible by q={q}", file=sys.stderr)
            return EXIT_DATA
        base_params = DesignParams(t, k, v // q)
        base = load_design(args.rec_base, base_params)
        predicted = predict_recursive_size(base_params, base.num_blocks).predicted_blocks
        note = _footnote(t, k, v // q, base.num_blocks)
        emit("construction 3 (recursive)", predicted * denom, note)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits; normalize the code
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.command == "verify-design":
            return _cmd_verify_design(args)
        if args.command == "build":
            return _cmd_build(args)
        if args.command == "skipcost":
            return _cmd_skipcost(args)
        if args.command == "randomize":
            return _cmd_randomize(args)
        if args.command == "report":
            return _table1(args) if args.table == "1" else _table3(args)
        raise AssertionError(f"unhandled command {args.command}")
    except (DesignError, ArrayFormatError, ConstructionError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
