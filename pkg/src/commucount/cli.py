"""Command-line front end.

Every invocation prints machine-readable result lines: JSON objects (one per
line) or CSV rows with --format csv.  Counts and exact ratios are rendered as
strings -- many values exceed what a double can hold -- so the "value" field
always round-trips exactly.  Successful single-value commands are cached in
an append-only JSON-lines file keyed by (command, canonical params, package
version); a hit replays the stored result verbatim.

Exit codes: 0 success, 1 failed verification criterion, 2 usage error,
3 work-budget refusal.
"""

from __future__ import annotations

import argparse
import csv
import fcntl
import json
import os
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__
from .count2 import count_commuting_2x2, gamma_split, normalized_count_2x2
from .core import main_term_constant_2x2, dependent_pair_constant
from .divisor import (
    classic_divisor_correlation,
    divisor_bound_check,
    doubling_report,
    lemma61_check,
    moment,
    parse_set_file,
    r_table,
    r_zero,
)
from .errors import BudgetExceeded
from .oracle import WorkBudget, brute_commuting_count
from .padic import (
    PadicParams,
    degenerate_padic_count,
    fast_padic_count,
    sigma_p,
    theorem13_main,
    valuation_classes_fast,
)
from .rank3 import classify_commuting_3x3, inconsistency_demo_4x4, lower_bound_certificate, lower_bound_E
from .verify import run_suite

_CACHED_COMMANDS = {"count2", "count3", "padic", "divisor", "moments", "dx", "lowerbound"}


def _fraction_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _pos_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--budget", type=_pos_int, default=None, metavar="STATES")
    common.add_argument("--threads", type=_pos_int, default=None)

    parser = argparse.ArgumentParser(
        prog="commucount",
        description="Exact counts and diagnostics for commuting integer matrix pairs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count2", parents=[common], help="2x2 commuting-pair count")
    p.add_argument("--n", type=_nonneg_int, required=True)
    p.add_argument("--split", action="store_true")

    p = sub.add_parser("count3", parents=[common], help="3x3 commuting-pair count (brute)")
    p.add_argument("--n", type=_nonneg_int, required=True)
    p.add_argument("--classify", action="store_true")

    p = sub.add_parser("padic", parents=[common], help="counts over Z/p^n")
    p.add_argument("--p", type=_pos_int, required=True)
    p.add_argument("--n", type=_pos_int, required=True)
    p.add_argument(
        "--method", choices=("fast", "brute", "classes", "degenerate"), default="fast"
    )

    p = sub.add_parser("divisor", parents=[common], help="restricted divisor correlation r_N(h)")
    p.add_argument("--n", type=_pos_int, required=True)
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--h", type=int, default=None)
    grp.add_argument("--all", action="store_true")
    grp.add_argument("--zero", action="store_true")

    p = sub.add_parser("moments", parents=[common], help="moments of the correlation table")
    p.add_argument("--n", type=_pos_int, required=True)
    p.add_argument("--k", type=_pos_int, required=True)

    p = sub.add_parser("dx", parents=[common], help="classical divisor correlation")
    p.add_argument("--x", type=_pos_int, required=True)
    p.add_argument("--h", type=_pos_int, required=True)

    p = sub.add_parser("doubling", parents=[common], help="sumset statistics of a finite set")
    p.add_argument("--set-file", required=True)
    p.add_argument("--lemma61", action="store_true")

    p = sub.add_parser("lowerbound", parents=[common], help="certified commuting-count lower bound")
    p.add_argument("--d", type=int, choices=(2, 3), required=True)
    p.add_argument("--n", type=_nonneg_int, required=True)

    p = sub.add_parser("demo4x4", parents=[common], help="4x4 infeasible-system demonstration")
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", choices=("quick", "full"), required=True)

    return parser


# --- command handlers ---------------------------------------------------------


def _cmd_count2(args, budget) -> list[dict]:
    params = {"n": args.n, "split": args.split}
    value = count_commuting_2x2(args.n)
    diagnostics: dict = {}
    if args.n >= 1:
        diagnostics["normalized"] = float(normalized_count_2x2(args.n))
        diagnostics["limit_constant"] = float(main_term_constant_2x2())
    if args.split:
        split = gamma_split(args.n)
        diagnostics["degenerate"] = str(split.degenerate)
        diagnostics["nondegenerate"] = str(split.nondegenerate)
        if args.n >= 1:
            diagnostics["degenerate_per_side5"] = split.degenerate / (2 * args.n) ** 5
    return [_result("count2", params, str(value), diagnostics)]


def _cmd_count3(args, budget) -> list[dict]:
    params = {"n": args.n, "classify": args.classify}
    diagnostics: dict = {}
    if args.classify:
        rc = classify_commuting_3x3(args.n, budget, args.threads)
        value = rc.total()
        for i, c in enumerate(rc.s):
            diagnostics[f"s{i}"] = str(c)
        diagnostics["proportion_s2"] = rc.s[2] / value
        diagnostics["proportion_s4"] = rc.s[4] / value
    else:
        value = brute_commuting_count(3, args.n, budget, args.threads)
    return [_result("count3", params, str(value), diagnostics)]


def _cmd_padic(args, budget) -> list[dict]:
    params = {"p": args.p, "n": args.n, "method": args.method}
    pp = PadicParams(args.p, args.n)
    diagnostics: dict = {}
    if args.method == "fast":
        value = fast_padic_count(pp)
        diagnostics["density"] = value / args.p ** (6 * args.n)
        diagnostics["main_term"] = _fraction_str(theorem13_main(pp))
        diagnostics["sigma_p"] = _fraction_str(sigma_p(args.p))
    elif args.method == "brute":
        from .oracle import brute_padic_solutions

        solutions = brute_padic_solutions(args.p, args.n, budget)
        value = args.p ** (2 * args.n) * solutions
        diagnostics["system_solutions"] = str(solutions)
    elif args.method == "classes":
        vc = valuation_classes_fast(pp)
        value = vc.total()
        for h, c in sorted(vc.classes.items()):
            diagnostics[f"class_{h}"] = str(c)
        diagnostics["residual"] = str(vc.residual)
    else:
        value = degenerate_padic_count(pp, budget)
        q = args.p**args.n
        diagnostics["per_n2_q72"] = value / (args.n**2 * q**3.5)
    return [_result("padic", params, str(value), diagnostics)]


def _cmd_divisor(args, budget) -> list[dict]:
    if args.all:
        table = r_table(args.n, budget)
        return [
            _result("divisor", {"n": args.n, "h": h}, str(table.values[h]), {})
            for h in table.support()
        ]
    if args.zero or args.h is None or args.h == 0:
        value = r_zero(args.n)
        predicted = float(dependent_pair_constant()) * args.n**2 * np.log(args.n) if args.n > 1 else 0.0
        diagnostics = {"central_gap_per_n2": (value - predicted) / args.n**2}
        return [_result("divisor", {"n": args.n, "h": 0}, str(value), diagnostics)]
    table = r_table(args.n, budget)
    value = table.value(args.h)
    diagnostics = {
        "divisor_bound_ratio": float(divisor_bound_check(args.n, args.h, budget, table))
    }
    return [_result("divisor", {"n": args.n, "h": args.h}, str(value), diagnostics)]


def _cmd_moments(args, budget) -> list[dict]:
    value = moment(args.n, args.k, budget)
    diagnostics = {
        "per_n_pow": value / args.n ** (2 * args.k + 2),
        "per_side_pow": value / (2 * args.n) ** (2 * args.k + 2),
    }
    return [_result("moments", {"n": args.n, "k": args.k}, str(value), diagnostics)]


def _cmd_dx(args, budget) -> list[dict]:
    value = classic_divisor_correlation(args.x, args.h)
    diagnostics = {"per_x_log2x": value / (args.x * np.log(args.x) ** 2) if args.x > 1 else 0.0}
    return [_result("dx", {"x": args.x, "h": args.h}, str(value), diagnostics)]


def _cmd_doubling(args, budget) -> list[dict]:
    aset = parse_set_file(args.set_file)
    report = doubling_report(aset)
    diagnostics: dict = {
        "set_size": report.size,
        "sumset_size": report.sumset_size,
    }
    if args.lemma61:
        check = lemma61_check(aset, budget)
        diagnostics["sup_autocorrelation"] = str(check["sup_r"])
        diagnostics["autocorrelation_at_zero"] = str(check["r0"])
        diagnostics["third_moment"] = str(check["i3"])
    params = {"set_file": os.path.basename(args.set_file), "lemma61": args.lemma61}
    return [_result("doubling", params, _fraction_str(report.ratio), diagnostics)]


def _cmd_lowerbound(args, budget) -> list[dict]:
    value = lower_bound_certificate(args.d, args.n)
    side = 2 * args.n + 1
    diagnostics = {
        "e_d": str(lower_bound_E(args.d, args.n)),
        "per_side_pow": value / side ** (args.d**2 + 1),
    }
    return [_result("lowerbound", {"d": args.d, "n": args.n}, str(value), diagnostics)]


def _cmd_demo4x4(args, budget) -> list[dict]:
    if args.seed is None:
        samples = [(0, 0, 0, 0, 0, 0, 0, 0)]
    else:
        rng = np.random.default_rng(args.seed)
        samples = [tuple(int(v) for v in rng.integers(-3, 4, 8)) for _ in range(100)]
    reports = [inconsistency_demo_4x4(*s) for s in samples]
    first = reports[0]
    diagnostics = {
        "samples": len(reports),
        "all_diagonals_vanish": int(all(r["diagonal_vanishes"] for r in reports)),
        "all_infeasible": int(all(r["infeasible"] for r in reports)),
        "all_row7_zero": int(all(r["seventh_row_zero"] for r in reports)),
        "first_six_determinant": first["first_six_determinant"],
    }
    params = {"seed": args.seed}
    return [_result("demo4x4", params, str(first["seventh_y"]), diagnostics)]


def _cmd_verify(args, budget) -> tuple[list[dict], int]:
    results = []
    failed = []
    last = time.monotonic()
    for res in run_suite(args.suite, threads=args.threads):
        now = time.monotonic()
        line = _result(
            "verify",
            {"suite": args.suite, "criterion": res.key},
            "1" if res.passed else "0",
            {"name": res.name, **_json_safe(res.details)},
        )
        line["runtime_ms"] = int((now - last) * 1000)
        last = now
        results.append(line)
        if not res.passed:
            failed.append(res.key)
    if failed:
        print(f"failed criteria: {', '.join(failed)}", file=sys.stderr)
    return results, (1 if failed else 0)


_HANDLERS = {
    "count2": _cmd_count2,
    "count3": _cmd_count3,
    "padic": _cmd_padic,
    "divisor": _cmd_divisor,
    "moments": _cmd_moments,
    "dx": _cmd_dx,
    "doubling": _cmd_doubling,
    "lowerbound": _cmd_lowerbound,
    "demo4x4": _cmd_demo4x4,
}


# --- result plumbing -----------------------------------------------------------


def _result(command: str, params: dict, value: str, diagnostics: dict) -> dict:
    return {
        "command": command,
        "params": params,
        "value": value,
        "diagnostics": _json_safe(diagnostics),
        "runtime_ms": 0,
    }


def _json_safe(obj):
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, Fraction):
        return _fraction_str(obj)
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    return str(obj)


def _render(results: list[dict], fmt: str) -> None:
    if fmt == "json":
        for res in results:
            print(json.dumps(res, sort_keys=True))
        return
    writer = csv.writer(sys.stdout)
    writer.writerow(
        ["command", "param_string", "value", "diagnostic_name", "diagnostic_value", "runtime_ms"]
    )
    for res in results:
        param_string = ";".join(f"{k}={res['params'][k]}" for k in sorted(res["params"]))
        diags = res["diagnostics"] or {"": ""}
        for name in sorted(diags):
            val = diags[name]
            if not isinstance(val, (int, float, str)):
                val = json.dumps(val, sort_keys=True)
            writer.writerow(
                [res["command"], param_string, res["value"], name, val, res["runtime_ms"]]
            )


# --- cache ----------------------------------------------------------------------


def _cache_file() -> str:
    root = os.environ.get("COMMUCOUNT_CACHE_DIR") or os.path.join(
        os.path.expanduser("~"), ".cache", "commucount"
    )
    os.makedirs(root, exist_ok=True)
    return os.path.join(root, "results.jsonl")


def _cache_key(command: str, params: dict) -> str:
    return json.dumps(
        {"command": command, "params": params, "version": __version__}, sort_keys=True
    )


def cache_lookup(command: str, params: dict) -> dict | None:
    path = _cache_file()
    if not os.path.exists(path):
        return None
    key = _cache_key(command, params)
    hit = None
    warned = False
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            try:
                entry = json.loads(line)
            except json.JSONDecodeError:
                if not warned:
                    print("warning: skipping corrupt cache lines", file=sys.stderr)
                    warned = True
                continue
            if entry.get("key") == key:
                hit = entry.get("result")
    return hit


def cache_store(command: str, params: dict, result: dict) -> None:
    entry = json.dumps({"key": _cache_key(command, params), "result": result}, sort_keys=True)
    with open(_cache_file(), "a", encoding="utf-8") as f:
        fcntl.flock(f, fcntl.LOCK_EX)
        f.write(entry + "\n")
        fcntl.flock(f, fcntl.LOCK_UN)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2

    budget = WorkBudget(args.budget) if args.budget else WorkBudget()
    try:
        if args.command == "verify":
            results, code = _cmd_verify(args, budget)
            _render(results, args.format)
            return code

        params_for_key = None
        handler = _HANDLERS[args.command]
        if args.command in _CACHED_COMMANDS and not args.no_cache:
            # cache only single-result invocations (divisor --all streams)
            if not (args.command == "divisor" and args.all):
                params_for_key = _params_snapshot(args)
                cached = cache_lookup(args.command, params_for_key)
                if cached is not None:
                    _render([cached], args.format)
                    return 0

        start = time.monotonic()
        results = handler(args, budget)
        elapsed_ms = int((time.monotonic() - start) * 1000)
        for res in results:
            res["runtime_ms"] = elapsed_ms
        if params_for_key is not None and len(results) == 1:
            cache_store(args.command, params_for_key, results[0])
        _render(results, args.format)
        return 0
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _params_snapshot(args) -> dict:
    skip = {"command", "format", "no_cache", "budget", "threads"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


if __name__ == "__main__":
    sys.exit(main())
