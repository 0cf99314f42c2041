"""Command-line front end.

Subcommands mirror the library: ``rk01`` (is the minimal rank 0, 1 or
larger), ``mrk`` (exact minimal rank, at most 3 columns), ``maxrank``,
``range`` and ``oracle`` (brute-force referees).  Input is a UTF-8 JSON
file with the entrywise minima and maxima; numbers travel as strings
("7", "-1/3", "0.25") so endpoints survive exactly.

Exit codes: 0 success, 2 malformed input, 3 enumeration cap hit or
result inconclusive/partial, 4 out of method scope.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction

from . import max_rank as _max_rank
from . import min_rank3 as _min_rank3
from . import oracle as _oracle
from .intervals import Interval, IntervalMatrix, PointMatrix, to_rational
from .rank_one import (
    SplitCapExceeded,
    contains_rank_one,
    contains_zero_matrix,
    find_rank_one,
    rank_one_trace,
    exact_h_bound,
)

DEFAULT_SPLIT_CAP = 16


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _parse_number(value) -> Fraction:
    if isinstance(value, bool):
        raise CliError(2, f"boolean {value!r} is not a matrix entry")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise CliError(2, f"float {value!r} rejected: write it as a string to stay exact")
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise CliError(2, f"cannot parse number {value!r}: {exc}") from None
    raise CliError(2, f"unsupported entry {value!r}")


def parse_matrix_data(data) -> IntervalMatrix:
    if not isinstance(data, dict):
        raise CliError(2, "matrix file must be a JSON object")
    for key in ("rows", "cols", "min", "max"):
        if key not in data:
            raise CliError(2, f"matrix file misses key {key!r}")
    rows, cols = data["rows"], data["cols"]
    if not isinstance(rows, int) or not isinstance(cols, int) or rows < 1 or cols < 1:
        raise CliError(2, "rows and cols must be positive integers")

    def grid(key):
        g = data[key]
        if not isinstance(g, list) or len(g) != rows or \
                any(not isinstance(r, list) or len(r) != cols for r in g):
            raise CliError(2, f"{key!r} grid is not {rows}x{cols}")
        return [[_parse_number(x) for x in r] for r in g]

    lo, hi = grid("min"), grid("max")
    entries = []
    for i in range(rows):
        row = []
        for j in range(cols):
            if lo[i][j] > hi[i][j]:
                raise CliError(2, f"entry ({i},{j}) has min > max")
            row.append(Interval(lo[i][j], hi[i][j]))
        entries.append(tuple(row))
    return IntervalMatrix(rows, cols, tuple(entries))


def load_matrix(path: str) -> IntervalMatrix:
    try:
        with open(path, "rb") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise CliError(2, f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise CliError(2, f"{path} is not valid JSON: {exc}") from None
    return parse_matrix_data(data)


def format_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def matrix_to_data(mu: IntervalMatrix) -> dict:
    return {
        "rows": mu.rows,
        "cols": mu.cols,
        "min": [[format_rational(e.lo) for e in row] for row in mu.entries],
        "max": [[format_rational(e.hi) for e in row] for row in mu.entries],
    }


def point_to_data(a: PointMatrix) -> dict:
    return {
        "rows": a.rows,
        "cols": a.cols,
        "entries": [[format_rational(x) for x in row] for row in a.entries],
    }


def matrix_digest(mu: IntervalMatrix) -> str:
    canonical = json.dumps(matrix_to_data(mu), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canonical.encode()).hexdigest()


def _report(command, mu, transposed, result, witness=None, caps=None, status="exact",
            started=None):
    return {
        "command": command,
        "input": {"rows": mu.rows, "cols": mu.cols, "digest": matrix_digest(mu)},
        "transposed": transposed,
        "status": status,
        "result": result,
        "witness": witness,
        "caps": caps or {},
        "timing": {"seconds": round(time.perf_counter() - started, 6) if started else None},
    }


def _violation_data(v):
    if v is None:
        return None
    return {
        "pairs": [list(p) for p in v.pairs],
        "matched_cols": list(v.matched_cols),
        "lhs": format_rational(v.lhs),
        "rhs": format_rational(v.rhs),
    }


def _trace_data(trace):
    data = {
        "kept_rows": list(trace.reduced.kept_rows),
        "kept_cols": list(trace.reduced.kept_cols),
        "direct": trace.direct,
        "cases": [],
    }
    if trace.pre is not None:
        data["pre_row_flips"] = list(trace.pre.row_flips)
        data["pre_col_flips"] = list(trace.pre.col_flips)
    for case in trace.cases:
        data["cases"].append({
            "splits": [[i, j, choice] for i, j, choice in case.split.split_choices],
            "row_flips": list(case.normalized.row_flips),
            "col_flips": list(case.normalized.col_flips),
            "blocked_entry": list(case.blocked_entry) if case.blocked_entry else None,
            "violation": _violation_data(case.violation),
            "contains_rank_one": case.contains,
            "conclusive": case.conclusive,
        })
    return data


def cmd_rk01(mu, args, started):
    h_bound = exact_h_bound(mu.rows, mu.cols) if min(mu.rows, mu.cols) >= 2 else None
    caps = {"h_max": args.h_max, "h_max_exact": h_bound,
            "split_cap": args.split_cap, "conclusive": True}
    try:
        trace = rank_one_trace(mu, args.h_max, args.split_cap)
    except SplitCapExceeded as exc:
        raise CliError(3, f"inconclusive: {exc}") from None
    if contains_zero_matrix(mu):
        result = {"verdict": "MRK=0", "trace": _trace_data(trace)}
        return _report("rk01", mu, args.transpose, result, caps=caps, started=started), 0
    caps["conclusive"] = trace.conclusive
    witness = None
    if trace.conclusive and trace.contains:
        verdict, code = "MRK=1", 0
        if args.witness:
            witness = point_to_data(find_rank_one(mu, args.split_cap))
    elif trace.conclusive:
        verdict, code = "MRK>1", 0
    else:
        verdict, code = "INCONCLUSIVE", 3
    status = "exact" if trace.conclusive else "inconclusive"
    result = {"verdict": verdict, "trace": _trace_data(trace)}
    return _report("rk01", mu, args.transpose, result, witness, caps, status, started), code


def cmd_mrk(mu, args, started):
    if mu.cols > 3:
        hint = "; retry with --transpose" if mu.rows <= 3 else ""
        raise CliError(4, f"out of method scope: {mu.cols} columns (at most 3){hint}")
    try:
        value, witness = _min_rank3.minimal_rank_witness(mu, args.split_cap)
    except SplitCapExceeded as exc:
        raise CliError(3, f"inconclusive: {exc}") from None
    witness_data = None
    if 1 <= value <= 2 or args.witness:
        witness_data = point_to_data(witness)
    result = {"min_rank": value}
    caps = {"split_cap": args.split_cap}
    return _report("mrk", mu, args.transpose, result, witness_data, caps, started=started), 0


def cmd_maxrank(mu, args, started):
    value = _max_rank.maximal_rank(mu)
    return _report("maxrank", mu, args.transpose, {"max_rank": value}, started=started), 0


def cmd_range(mu, args, started):
    upper = _max_rank.maximal_rank(mu)
    if mu.cols <= 3:
        try:
            lower = _min_rank3.minimal_rank(mu, args.split_cap)
        except SplitCapExceeded as exc:
            raise CliError(3, f"inconclusive: {exc}") from None
        result = {"min_rank": lower, "max_rank": upper,
                  "range": list(range(lower, upper + 1))}
        return _report("range", mu, args.transpose, result, started=started), 0
    try:
        has_rank_one = contains_rank_one(mu, split_cap=args.split_cap)
    except SplitCapExceeded as exc:
        raise CliError(3, f"inconclusive: {exc}") from None
    if contains_zero_matrix(mu):
        lower = 0
    elif has_rank_one:
        lower = 1
    elif upper <= 2:
        lower = upper  # squeezed: 2 <= min rank <= max rank <= 2
    else:
        result = {"min_rank": None, "max_rank": upper,
                  "min_rank_bounds": [2, upper], "range": None}
        report = _report("range", mu, args.transpose, result, status="partial",
                         started=started)
        return report, 3
    result = {"min_rank": lower, "max_rank": upper,
              "range": list(range(lower, upper + 1))}
    return _report("range", mu, args.transpose, result, started=started), 0


def cmd_oracle(mu, args, started):
    sub = args.oracle_command
    if sub == "vertex-mrk":
        try:
            value, vertex = _oracle.vertex_max_rank_witness(mu, args.vertex_cap)
        except ValueError as exc:
            raise CliError(3, str(exc)) from None
        witness = point_to_data(vertex) if args.witness else None
        return _report("oracle:vertex-mrk", mu, args.transpose, {"max_rank": value},
                       witness, {"vertex_cap": args.vertex_cap}, started=started), 0
    if sub == "sample":
        lo, hi = _oracle.sample_rank_bounds(mu, args.n, args.seed)
        result = {"min_rank_upper_bound": lo, "max_rank_lower_bound": hi,
                  "n": args.n, "seed": args.seed}
        return _report("oracle:sample", mu, args.transpose, result, started=started), 0
    if sub == "rank1":
        try:
            solution = _oracle.rank_one_feasible(mu)
        except ValueError as exc:
            raise CliError(4, f"oracle precondition failed: {exc}") from None
        witness = None
        if solution is not None and args.witness:
            witness = point_to_data(_oracle.outer_product(*solution))
        return _report("oracle:rank1", mu, args.transpose,
                       {"feasible": solution is not None}, witness, started=started), 0
    raise CliError(2, f"unknown oracle subcommand {sub!r}")


def _render_text(report, out):
    result = report["result"]
    command = report["command"]
    if command == "rk01":
        print(result["verdict"], file=out)
        trace = result.get("trace")
        if trace:
            print(f"kept rows {trace['kept_rows']} cols {trace['kept_cols']}; "
                  f"{len(trace['cases'])} case(s)", file=out)
            if trace["direct"]:
                print(f"decided directly: {trace['direct']}", file=out)
            for idx, case in enumerate(trace["cases"]):
                if case["blocked_entry"] is not None:
                    detail = f"strictly negative entry at {tuple(case['blocked_entry'])}"
                elif case["violation"] is not None:
                    v = case["violation"]
                    detail = f"violation {v['lhs']} > {v['rhs']} on pairs {v['pairs']}"
                else:
                    detail = "product criterion holds"
                print(f"case {idx}: splits {case['splits']} -> "
                      f"rank-one={case['contains_rank_one']} ({detail})", file=out)
    elif command == "mrk":
        print(f"mrk = {result['min_rank']}", file=out)
    elif command == "maxrank":
        print(f"Mrk = {result['max_rank']}", file=out)
    elif command == "range":
        if result.get("range") is not None:
            print(f"rank range = {result['range']}", file=out)
        else:
            lo, hi = result["min_rank_bounds"]
            print(f"PARTIAL: Mrk = {result['max_rank']}, mrk in [{lo}, {hi}]", file=out)
    elif command == "oracle:vertex-mrk":
        print(f"vertex Mrk = {result['max_rank']}", file=out)
    elif command == "oracle:sample":
        print(f"sampled rank bounds: mrk <= {result['min_rank_upper_bound']}, "
              f"Mrk >= {result['max_rank_lower_bound']}", file=out)
    elif command == "oracle:rank1":
        print(f"rank-one feasible = {result['feasible']}", file=out)
    if report.get("witness"):
        print(f"witness: {json.dumps(report['witness'])}", file=out)
    if report["status"] != "exact":
        print(f"status: {report['status']}", file=out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rankrange",
        description="Exact rank range computations for interval matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("file", help="JSON matrix file (rows, cols, min, max)")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--transpose", action="store_true",
                       help="work on the transpose (ranks are unchanged)")
        p.add_argument("--witness", action="store_true")
        p.add_argument("--h-max", type=int, default=None, dest="h_max",
                       help="cap the product-criterion tuple length; a capped "
                            "run may report an inconclusive positive")
        p.add_argument("--split-cap", type=int, default=DEFAULT_SPLIT_CAP,
                       dest="split_cap",
                       help=f"max straddling entries to split (default {DEFAULT_SPLIT_CAP})")
        p.add_argument("--seed", type=int, default=0)

    for name in ("rk01", "mrk", "maxrank", "range"):
        common(sub.add_parser(name))
    oracle_parser = sub.add_parser("oracle")
    oracle_parser.add_argument("oracle_command", choices=("vertex-mrk", "sample", "rank1"))
    common(oracle_parser)
    oracle_parser.add_argument("--n", type=int, default=100, help="sample count")
    oracle_parser.add_argument("--vertex-cap", type=int, default=20, dest="vertex_cap")
    return parser


_HANDLERS = {
    "rk01": cmd_rk01,
    "mrk": cmd_mrk,
    "maxrank": cmd_maxrank,
    "range": cmd_range,
    "oracle": cmd_oracle,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        mu = load_matrix(args.file)
        if args.transpose:
            mu = mu.transpose()
        report, code = _HANDLERS[args.command](mu, args, started)
    except CliError as exc:
        print(f"rankrange: {exc}", file=sys.stderr)
        return exc.code
    if args.format == "json":
        print(json.dumps(report, indent=2))
    else:
        _render_text(report, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
