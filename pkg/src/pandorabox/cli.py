"""Command-line front end.

Commands read a JSON instance document and emit either a human-readable
table or, with --json, a machine report.  The machine report is the
contract: identical inputs produce byte-identical reports apart from the
timing field.

Exit codes: 0 success, 1 a verified suboptimality or assumption violation
was found (informative, for compare/check/case/gittins), 2 usage, parse, or
validation error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .cases import (
    build_bernoulli_triple_case,
    build_concave_bernoulli_case,
    build_degenerate_triple_case,
    build_increment_dependence_case,
    geometric_diminishing_table,
    search_order_weighted_counterexample,
    verify_bundle,
)
from .core import (
    ConcaveSumUtility,
    PiecewiseLinear,
    SearchState,
    check_increment_independence,
    check_monotone_submodular,
    check_ord,
    check_spr,
    enumerate_histories,
)
from .documents import (
    bundle_to_document,
    instance_to_document,
    load_instance_file,
    reservation_to_json,
    save_document,
)
from .errors import PandoraError, ResourceLimitError, ValidationError, VerificationError
from .gittins import gittins_index, verify_index_consistency
from .policy import (
    DEFAULT_NODE_CAP,
    default_tie_break,
    optimal_expected_value,
    pandora_expected_value,
    policy_gap,
    policy_gaps_over_tiebreaks,
)
from .reservation import generalized_reservation_with_method

NODE_CAP_ENV = "PANDORABOX_NODE_CAP"
GAP_TOL = 1e-9
SWEEP_LIMIT = 5  # compare sweeps every tie-break up to this many boxes

CASE_NAMES = ("lemma1", "thm1-i", "thm1-ii", "example1", "thm4-search")


def _node_cap(args) -> int:
    if args.node_cap is not None:
        return args.node_cap
    env = os.environ.get(NODE_CAP_ENV)
    return int(env) if env else DEFAULT_NODE_CAP


def _history_key_str(key) -> str:
    return ",".join(f"{i}={v}" for i, v in key)


def _emit(args, report: dict, human_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        for line in human_lines:
            print(line)


def _report(command: str, parameters: dict, results: dict, exit_status: int, started: float) -> dict:
    return {
        "schema": 1,
        "command": command,
        "parameters": parameters,
        "results": results,
        "exit_status": exit_status,
        "timing_ms": (time.perf_counter() - started) * 1000.0,
    }


def _cmd_solve(args) -> int:
    started = time.perf_counter()
    instance, tie_break = load_instance_file(args.file)
    tb = tie_break or default_tie_break(instance)
    evaluation = pandora_expected_value(instance, tb, node_cap=_node_cap(args))
    trace = [
        {"history": _history_key_str(k) or "(start)", "action": str(a)}
        for k, a in sorted(evaluation.action_log.items())
    ]
    results = {
        "expected_payoff": evaluation.expected_payoff,
        "tree_nodes": evaluation.tree_nodes,
        "tie_break": list(tb.priority),
        "trace": trace,
    }
    lines = [
        f"rule expected payoff: {evaluation.expected_payoff!r}",
        f"outcome-tree nodes:   {evaluation.tree_nodes}",
        f"tie-break:            {list(tb.priority)}",
        "action trace:",
    ]
    lines += [f"  {row['history']:<30} -> {row['action']}" for row in trace]
    _emit(args, _report("solve", {"file": args.file}, results, 0, started), lines)
    return 0


def _cmd_oracle(args) -> int:
    started = time.perf_counter()
    instance, _ = load_instance_file(args.file)
    evaluation = optimal_expected_value(instance, node_cap=_node_cap(args))
    results = {
        "expected_payoff": evaluation.expected_payoff,
        "tree_nodes": evaluation.tree_nodes,
    }
    lines = [
        f"optimal expected payoff: {evaluation.expected_payoff!r}",
        f"states expanded:         {evaluation.tree_nodes}",
    ]
    _emit(args, _report("oracle", {"file": args.file}, results, 0, started), lines)
    return 0


def _cmd_compare(args) -> int:
    started = time.perf_counter()
    instance, tie_break = load_instance_file(args.file)
    node_cap = _node_cap(args)
    if len(instance.boxes) <= SWEEP_LIMIT:
        sweeps = policy_gaps_over_tiebreaks(instance, node_cap=node_cap)
    else:
        tb = tie_break or default_tie_break(instance)
        sweeps = [(tb, policy_gap(instance, tb, node_cap=node_cap))]
    worst = max(g for _, g in sweeps)
    exit_status = 1 if worst > GAP_TOL else 0
    results = {
        "worst_gap": worst,
        "suboptimal": exit_status == 1,
        "gaps": [{"tie_break": list(tb.priority), "gap": g} for tb, g in sweeps],
    }
    lines = [f"worst gap over {len(sweeps)} tie-break(s): {worst!r}"]
    lines += [f"  tie-break {list(tb.priority)}: gap {g!r}" for tb, g in sweeps]
    lines.append("verdict: rule suboptimal" if exit_status else "verdict: rule optimal here")
    _emit(args, _report("compare", {"file": args.file}, results, exit_status, started), lines)
    return exit_status


def _witness_json(report) -> dict | None:
    if report.witness is None:
        return None
    return {
        "vectors": [list(v) for v in report.witness.vectors],
        "lhs": report.witness.lhs,
        "rhs": report.witness.rhs,
        "note": report.witness.note,
    }


def _cmd_check(args) -> int:
    started = time.perf_counter()
    instance, _ = load_instance_file(args.file)
    grid = sorted({0.0} | {v for b in instance.boxes for v in b.dist.values})
    reports = [
        check_monotone_submodular(instance.utility, grid, args.max_arity),
        check_increment_independence(instance.utility, grid, args.max_arity),
        check_spr(instance.utility, grid, args.max_arity),
    ]
    cap = min(args.ord_cap, len(instance.boxes) - 1)
    histories = enumerate_histories(instance, cap)
    reports.append(check_ord(instance, histories))

    exit_status = 1 if any(not r.holds for r in reports) else 0
    results = {
        "grid": grid,
        "checks": [
            {"label": r.label, "holds": r.holds, "witness": _witness_json(r)}
            for r in reports
        ],
    }
    lines = []
    for r in reports:
        verdict = "holds" if r.holds else "VIOLATED"
        lines.append(f"{r.label:<24} {verdict}")
        if r.witness is not None:
            lines.append(f"  witness: {r.witness.note}")
            lines.append(f"  sides:   {r.witness.lhs!r} vs {r.witness.rhs!r}")
            lines.append(f"  vectors: {[list(v) for v in r.witness.vectors]}")
    _emit(args, _report("check", {"file": args.file, "max_arity": args.max_arity}, results, exit_status, started), lines)
    return exit_status


def _cmd_gittins(args) -> int:
    started = time.perf_counter()
    instance, _ = load_instance_file(args.file)
    if instance.utility.spr_form() is None:
        raise ValidationError(
            f"utility kind '{instance.utility.kind}' has no base/bonus decomposition; "
            "the index is defined for SPR-form utilities only"
        )
    rows = []
    any_inconsistent = False
    for box in instance.boxes:
        index = gittins_index(box, instance.utility)
        try:
            consistency = verify_index_consistency(box, instance.utility)
            consistent = consistency.consistent
            reservation = consistency.reservation
        except VerificationError:
            consistent = False
            any_inconsistent = True
            from .reservation import generalized_reservation

            reservation = generalized_reservation(
                SearchState.initial(instance), box.id
            )
        rows.append(
            {
                "box": box.id,
                "index": None if index == float("inf") else index,
                "reservation": reservation_to_json(reservation),
                "consistent": consistent,
            }
        )
    exit_status = 1 if any_inconsistent else 0
    lines = ["box  index          reservation    consistent"]
    for row in rows:
        idx = "inf" if row["index"] is None else repr(row["index"])
        res = row["reservation"]
        res_str = "inf" if res["kind"] == "infinite" else repr(res["value"])
        lines.append(f"{row['box']:<4} {idx:<14} {res_str:<14} {row['consistent']}")
    _emit(args, _report("gittins", {"file": args.file}, {"boxes": rows}, exit_status, started), lines)
    return exit_status


def _parse_history(instance, text: str):
    state = SearchState.initial(instance)
    if not text:
        return state
    for part in text.split(","):
        if "=" not in part:
            raise ValidationError(f"history entry '{part}' is not id=value")
        raw_id, raw_value = part.split("=", 1)
        try:
            box_id = int(raw_id)
            value = float(raw_value)
        except ValueError:
            raise ValidationError(f"history entry '{part}' is not id=value") from None
        box = instance.box(box_id)
        snapped = [v for v in box.dist.values if abs(v - value) <= 1e-9]
        if not snapped:
            raise ValidationError(
                f"history entry '{part}': value not in box {box_id}'s support {box.dist.values}"
            )
        state = state.open_box(box_id, snapped[0])
    return state


def _cmd_reservation(args) -> int:
    started = time.perf_counter()
    instance, _ = load_instance_file(args.file)
    state = _parse_history(instance, args.history)
    rows = []
    for box_id in state.unopened():
        value, method = generalized_reservation_with_method(state, box_id)
        rows.append({"box": box_id, "reservation": reservation_to_json(value), "method": method})
    results = {
        "history": _history_key_str(state.observed) or "(start)",
        "reservations": rows,
    }
    lines = [f"history: {results['history']}", "box  reservation      method"]
    for row in rows:
        res = row["reservation"]
        res_str = {"zero": "0", "infinite": "inf"}.get(res["kind"], repr(res["value"]))
        lines.append(f"{row['box']:<4} {res_str:<16} {row['method']}")
    _emit(args, _report("reservation", {"file": args.file, "history": args.history}, results, 0, started), lines)
    return 0


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(","))


def _build_case(args):
    if args.name == "lemma1":
        psi = tuple(
            (float(s), float(s) ** 0.5)
            for s in sorted({0.0, args.xj, args.xk_lo, args.xk_hi, args.xj + args.xk_hi,
                             args.xk_lo + args.xk_hi, args.xj + 2 * args.xk_hi})
        )
        utility = ConcaveSumUtility(PiecewiseLinear(psi))
        return build_increment_dependence_case(utility, args.xj, args.xk_lo, args.xk_hi, args.eps)
    if args.name == "thm1-i":
        return build_degenerate_triple_case(args.w1, args.w2, args.w3, args.x0, args.c1, args.c2)
    if args.name == "thm1-ii":
        return build_bernoulli_triple_case(args.w2, args.x0, _floats(args.probs), _floats(args.costs))
    if args.name == "example1":
        boxes = tuple(
            tuple(float(x) for x in pair.split(":")) for pair in args.boxes.split(",")
        )
        psi = geometric_diminishing_table(len(boxes) + 1)
        return build_concave_bernoulli_case(psi, boxes)
    if args.name == "thm4-search":
        return search_order_weighted_counterexample(args.w2, args.w3, args.seed, args.budget)
    raise ValidationError(f"unknown case '{args.name}'")


def _cmd_case(args) -> int:
    started = time.perf_counter()
    bundle = _build_case(args)
    params = {"name": args.name}

    if bundle is None:  # search exhausted its budget
        results = {"found": False, "budget": args.budget, "seed": args.seed}
        lines = [f"no counterexample found within {args.budget} trials (no claim of nonexistence)"]
        _emit(args, _report("case", params, results, 0, started), lines)
        return 0

    verification = verify_bundle(bundle, node_cap=_node_cap(args))
    if args.save:
        save_document(bundle_to_document(bundle), args.save)
    if not verification.passed:
        failures = "; ".join(c.name for c in verification.failures())
        raise VerificationError(f"case '{args.name}' failed verification: {failures}")

    demonstrates_violation = bundle.expected_gap == "positive" or (
        isinstance(bundle.expected_gap, float) and bundle.expected_gap > GAP_TOL
    )
    exit_status = 1 if demonstrates_violation else 0
    results = {
        "found": True,
        "case": bundle.label,
        "expected_gap": bundle.expected_gap,
        "gap": verification.gap,
        "tie_break": list(bundle.tie_break.priority),
        "checks": [
            {"name": c.name, "passed": c.passed, "detail": c.detail}
            for c in verification.checks
        ],
        "instance": instance_to_document(bundle.instance, bundle.tie_break),
    }
    lines = [f"case {bundle.label}: verification passed"]
    if verification.gap is not None:
        lines.append(f"gap: {verification.gap!r}")
    lines += [f"  [ok] {c.name}" + (f" ({c.detail})" if c.detail else "") for c in verification.checks]
    if args.save:
        lines.append(f"bundle written to {args.save}")
    _emit(args, _report("case", params, results, exit_status, started), lines)
    return exit_status


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pandorabox",
        description=(
            "Exact solver and verifier for sequential box-opening problems: "
            "reservation values, the greatest-reservation-value rule, a "
            "brute-force optimal oracle, index calibration, and constructive "
            "demonstration cases."
        ),
        epilog=(
            f"The outcome-tree node cap defaults to {DEFAULT_NODE_CAP} and may be "
            f"overridden with --node-cap or the {NODE_CAP_ENV} environment variable."
        ),
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit the machine report")
    common.add_argument("--node-cap", type=int, default=None, help="outcome-tree node cap")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="run the rule and report its exact expected payoff")
    p.add_argument("file")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("oracle", parents=[common], help="exact optimal expected payoff by dynamic programming")
    p.add_argument("file")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("compare", parents=[common], help="gap between the oracle and the rule")
    p.add_argument("file")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("check", parents=[common], help="structural checks on the instance's utility")
    p.add_argument("file")
    p.add_argument("--max-arity", type=int, default=3, help="largest argument tuple checked")
    p.add_argument("--ord-cap", type=int, default=2, help="largest opened set in ordering-stability histories")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("gittins", parents=[common], help="per-box index and consistency verdicts (SPR utilities)")
    p.add_argument("file")
    p.set_defaults(func=_cmd_gittins)

    p = sub.add_parser("reservation", parents=[common], help="reservation values of the unopened boxes at a history")
    p.add_argument("file")
    p.add_argument("--history", default="", help="comma-separated id=value pairs of opened boxes")
    p.set_defaults(func=_cmd_reservation)

    p = sub.add_parser("case", parents=[common], help="build and verify a named demonstration case")
    p.add_argument("name", choices=CASE_NAMES)
    p.add_argument("--save", default=None, help="write the verified bundle to this path")
    p.add_argument("--xj", type=float, default=1.0)
    p.add_argument("--xk-lo", type=float, default=1.0)
    p.add_argument("--xk-hi", type=float, default=2.0)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--x0", type=float, default=1.0)
    p.add_argument("--w1", type=float, default=1.0)
    p.add_argument("--w2", type=float, default=0.8)
    p.add_argument("--w3", type=float, default=0.5)
    p.add_argument("--c1", type=float, default=0.3)
    p.add_argument("--c2", type=float, default=0.6)
    p.add_argument("--probs", default="0.5,0.5,0.5")
    p.add_argument("--costs", default="0.1,0.2,0.3")
    p.add_argument("--boxes", default="0.1:0.5,0.2:0.5,0.3:0.5")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=400)
    p.set_defaults(func=_cmd_case)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PandoraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
