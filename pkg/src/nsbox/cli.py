"""Command-line interface.

Subcommands: optimize (exact optimum of an argument under a regime), sweep
(CSV of optima and vertex PPC across symmetric outcome counts), vertices
(closed-form extremal boxes as JSON lines), verify (validity and PP/PN/PPC
of a box file), pn (the PN family of a box file as JSON).

All probabilities print as exact "num/den" strings; CSV adds decimal
approximation columns for plotting. Outcomes are 1-based and inputs 0-based
on every surface. Output is byte-deterministic for identical invocations.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .boxes import (
    JointBox,
    Scenario,
    box_from_json,
    box_to_json_dict,
    is_valid_box,
)
from .hardy import (
    ArgumentNotSatisfied,
    HardyArgument,
    KIND_CONVENTIONAL,
    KIND_RELAXED,
    OptimizationReport,
    attaining_nonlocal_vertex,
    best_satisfied_argument,
    build_argument,
    compute_pn,
    evaluate_pp,
    max_success_lhv,
    max_success_ns,
    quantum_reference,
)
from .rationals import format_rational, parse_rational
from .vertices import enumerate_vertices

__all__ = ["main"]


def _dims_flag(text: str) -> Scenario:
    parts = text.split(",")
    try:
        dims = [int(p) for p in parts]
        return Scenario.from_dims(dims)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad --dims {text!r}: {exc}") from exc


def _p_flag(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad --p {text!r}: {exc}") from exc


def _relabeling_json_dict(arg: HardyArgument) -> dict:
    aperms, bperms = arg.relabeling.resolved(arg.scenario)
    return {
        "alice_input_swap": arg.relabeling.alice_input_swap,
        "bob_input_swap": arg.relabeling.bob_input_swap,
        "alice_outcome_perms": [[v + 1 for v in perm] for perm in aperms],
        "bob_outcome_perms": [[v + 1 for v in perm] for perm in bperms],
    }


def _argument_json_dict(arg: HardyArgument) -> dict:
    return {
        "kind": arg.kind,
        "dims": list(arg.scenario.dims()),
        "p": format_rational(arg.last_condition_bound),
        "relabeling": _relabeling_json_dict(arg),
    }


def _report_json_dict(report: OptimizationReport) -> dict:
    return {
        "argument": _argument_json_dict(report.argument),
        "regime": report.regime,
        "optimum": format_rational(report.optimum),
        "witness": box_to_json_dict(report.witness),
    }


def _load_box(path: str) -> JointBox:
    with open(path, "r", encoding="utf-8") as fh:
        return box_from_json(fh.read())


def cmd_optimize(args) -> int:
    try:
        arg, _events = build_argument(args.kind, args.dims, args.p)
        if args.regime == "ns":
            report = max_success_ns(arg)
        else:
            report = max_success_lhv(arg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(_report_json_dict(report), indent=2))
    return 0


def cmd_vertices(args) -> int:
    kinds = ("local", "nonlocal") if args.kind == "all" else (args.kind,)
    for kind in kinds:
        for label, box in enumerate_vertices(args.dims, kind):
            line = {"kind": kind, "label": list(label), "box": box_to_json_dict(box)}
            print(json.dumps(line, separators=(",", ":")))
    return 0


def _decimal(q: Fraction) -> str:
    return f"{q.numerator / q.denominator:.12g}"


def sweep_rows(d_min: int, d_max: int, exhaustive_perms: bool = False) -> list[dict]:
    """One row per symmetric outcome count d: both arguments' no-signaling
    optima by fresh LP solves, the attaining congruence vertex's PPC via the
    relabeling search, and the quantum reference (d = 2 only)."""
    rows = []
    for d in range(d_min, d_max + 1):
        scenario = Scenario.symmetric(d)
        conventional, _ = build_argument(KIND_CONVENTIONAL, scenario)
        relaxed, _ = build_argument(KIND_RELAXED, scenario)
        q_h = max_success_ns(conventional).optimum
        q_rh = max_success_ns(relaxed).optimum
        _label, vertex_box, pp = attaining_nonlocal_vertex(relaxed)
        # every permutation is affordable only for small blocks
        exhaustive = exhaustive_perms and d <= 4
        pn = compute_pn(vertex_box, relaxed, exhaustive_perms=exhaustive).pn
        ref = quantum_reference(KIND_CONVENTIONAL, d) if d == 2 else None
        rows.append({
            "d": d,
            "q_H_gnst": q_h,
            "q_RH_gnst": q_rh,
            "PPC_gnst": pn - pp,
            "quantum_ref": ref.value if ref is not None else None,
        })
    return rows


def render_sweep_csv(rows: list[dict]) -> str:
    header = ("d,q_H_gnst,q_RH_gnst,PPC_gnst,"
              "q_H_gnst_dec,q_RH_gnst_dec,PPC_gnst_dec,quantum_ref")
    lines = [header]
    for row in rows:
        ref = "" if row["quantum_ref"] is None else f"{row['quantum_ref']:.12g}"
        lines.append(",".join([
            str(row["d"]),
            format_rational(row["q_H_gnst"]),
            format_rational(row["q_RH_gnst"]),
            format_rational(row["PPC_gnst"]),
            _decimal(row["q_H_gnst"]),
            _decimal(row["q_RH_gnst"]),
            _decimal(row["PPC_gnst"]),
            ref,
        ]))
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    if not 2 <= args.d_min <= args.d_max <= args.cap:
        print(
            f"error: need 2 <= d-min <= d-max <= cap ({args.cap}), "
            f"got d-min={args.d_min}, d-max={args.d_max}",
            file=sys.stderr)
        return 2
    text = render_sweep_csv(sweep_rows(args.d_min, args.d_max, args.exhaustive_perms))
    if args.out == "-":
        sys.stdout.write(text)
        return 0
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {args.out!r}: {exc}", file=sys.stderr)
        return 1
    return 0


def cmd_verify(args) -> int:
    try:
        box = _load_box(args.box)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report = is_valid_box(box)
    print(f"valid: {'yes' if report.ok else 'no'}")
    if not report.ok:
        for label in report.violations:
            print(f"violated: {label}")
        return 1
    print(f"kind: {args.kind}")
    best = best_satisfied_argument(box, args.kind, args.p, args.exhaustive_perms)
    if best is None:
        identity_arg, _ = build_argument(args.kind, box.scenario, args.p)
        try:
            evaluate_pp(box, identity_arg)
        except ArgumentNotSatisfied as exc:
            print(f"pp: not satisfied ({exc})")
            return 0
        raise RuntimeError("internal error: identity argument satisfied but not found by search")
    arg, pp = best
    pn = compute_pn(box, arg, args.exhaustive_perms).pn
    print(f"pp: {format_rational(pp)}")
    print(f"pn: {format_rational(pn)}")
    print(f"ppc: {format_rational(pn - pp)}")
    print(f"relabeling: {json.dumps(_relabeling_json_dict(arg))}")
    return 0


def cmd_pn(args) -> int:
    try:
        box = _load_box(args.box)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    report = is_valid_box(box)
    if not report.ok:
        for label in report.violations:
            print(f"violated: {label}", file=sys.stderr)
        return 1
    best = best_satisfied_argument(box, args.kind, args.p, args.exhaustive_perms)
    if best is None:
        print(f"error: no satisfied {args.kind} relabeling for this box", file=sys.stderr)
        return 1
    arg, pp = best
    result = compute_pn(box, arg, args.exhaustive_perms)
    payload = {
        "base": _argument_json_dict(arg),
        "pp": format_rational(pp),
        "pn": format_rational(result.pn),
        "ppc": format_rational(result.pn - pp),
        "family": [_argument_json_dict(member) for member in result.family],
    }
    print(json.dumps(payload, indent=2))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nsbox",
        description="Exact no-signaling boxes and Hardy-type paradox optima.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_kind(p, choices=(KIND_CONVENTIONAL, KIND_RELAXED)):
        p.add_argument("--kind", required=True, choices=list(choices))

    def add_common_argument_flags(p):
        p.add_argument("--p", type=_p_flag, default=Fraction(0),
                       help="bound on the last condition (relaxed kind only), e.g. 1/10")
        p.add_argument("--exhaustive-perms", action="store_true",
                       help="search every outcome permutation instead of shifts and reversals")

    p_opt = sub.add_parser("optimize", help="exact optimum of an argument under a regime")
    add_kind(p_opt)
    p_opt.add_argument("--dims", required=True, type=_dims_flag,
                       help="outcome counts a0,a1,b0,b1 (e.g. 3,3,3,3)")
    p_opt.add_argument("--p", type=_p_flag, default=Fraction(0),
                       help="bound on the last condition (relaxed kind only), e.g. 1/10")
    p_opt.add_argument("--regime", choices=["ns", "lhv"], default="ns")
    p_opt.set_defaults(func=cmd_optimize)

    p_sweep = sub.add_parser("sweep", help="CSV across symmetric outcome counts")
    p_sweep.add_argument("--d-min", type=int, default=2)
    p_sweep.add_argument("--d-max", type=int, default=6)
    p_sweep.add_argument("--cap", type=int, default=16,
                         help="upper guard for d-max (LPs grow quickly)")
    p_sweep.add_argument("--out", default="-", help="output path, or - for stdout")
    p_sweep.add_argument("--exhaustive-perms", action="store_true",
                         help="exhaustive relabeling search where affordable (d <= 4)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_vert = sub.add_parser("vertices", help="closed-form extremal boxes as JSON lines")
    p_vert.add_argument("--dims", required=True, type=_dims_flag)
    p_vert.add_argument("--kind", choices=["local", "nonlocal", "all"], default="all")
    p_vert.set_defaults(func=cmd_vertices)

    p_verify = sub.add_parser("verify", help="validity and PP/PN/PPC of a box file")
    p_verify.add_argument("box", help="path to a box JSON file")
    add_kind(p_verify)
    add_common_argument_flags(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_pn = sub.add_parser("pn", help="PN family of a box file as JSON")
    p_pn.add_argument("box", help="path to a box JSON file")
    add_kind(p_pn)
    add_common_argument_flags(p_pn)
    p_pn.set_defaults(func=cmd_pn)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
