"""Command-line interface.

Commands: analyze, verify-quantum, verify-onc, simulate, instances emit.
Exit codes: 0 success, 1 I/O or unloadable input, 2 validation/verification
failure, 3 solver budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .classical import InstanceTooLargeError
from .hypergraph import (
    ContextHypergraph,
    HypergraphFormatError,
    emit_hypergraph,
    parse_hypergraph,
    validate,
)
from .instances import build_instance
from .onc import (
    HVModelFormatError,
    collapse,
    collapse_margins,
    default_context_choice,
    epsilon_slope,
    expectations,
    parse_hv_model,
    robust_bound,
    sample_onc,
    validate_onc,
)
from .quantum import (
    DimensionMismatchError,
    QuantumModelFormatError,
    max_quantum_value,
    parse_quantum_model,
    verify_quantum_model,
)
from .rationals import format_float, format_rational
from .report import (
    compute_bounds_report,
    render_report_json,
    render_report_text,
)
from .theta import DEFAULT_SDP_ITERS

EXIT_OK = 0
EXIT_IO = 1
EXIT_VALIDATION = 2
EXIT_BUDGET = 3


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write_output(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_hypergraph(path: str) -> tuple[ContextHypergraph | None, int]:
    try:
        text = _read_text(path)
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return None, EXIT_IO
    try:
        hypergraph = parse_hypergraph(text)
    except HypergraphFormatError as exc:
        print(f"validation failed for {path}:", file=sys.stderr)
        for finding in exc.findings:
            print(f"  {finding.severity}: {finding.location}: {finding.message}",
                  file=sys.stderr)
        return None, EXIT_VALIDATION
    return hypergraph, EXIT_OK


def _default_seed(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("CTXBOUNDS_SEED")
    return int(env) if env else 0


def _cmd_analyze(args: argparse.Namespace) -> int:
    hypergraph, status = _load_hypergraph(args.hypergraph)
    if hypergraph is None:
        return status
    report_struct = validate(hypergraph)
    for finding in report_struct.warnings():
        print(f"warning: {finding.location}: {finding.message}", file=sys.stderr)

    bounds = ("cl", "g", "qu") if args.bounds == "all" else tuple(
        b.strip() for b in args.bounds.split(",") if b.strip()
    )
    unknown = [b for b in bounds if b not in ("cl", "g", "qu")]
    if unknown:
        print(f"error: unknown bounds {unknown}; use cl,g,qu or all", file=sys.stderr)
        return EXIT_IO

    target: float | str | None = None
    if args.target is not None:
        target = "qu" if args.target == "qu" else float(Fraction(args.target))
        if target == "qu" and "qu" not in bounds:
            bounds = bounds + ("qu",)
    epsilon = Fraction(args.epsilon) if args.epsilon is not None else None

    try:
        report = compute_bounds_report(
            hypergraph,
            bounds=bounds,
            target=target,
            epsilon=epsilon,
            sdp_tol=args.tol,
            sdp_iters=args.sdp_iters,
        )
    except InstanceTooLargeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    for stage, seconds in report.timings.items():
        print(f"timing: {stage} {seconds:.3f}s", file=sys.stderr)

    text = (
        render_report_json(report)
        if args.format == "json"
        else render_report_text(report)
    )
    _write_output(text, args.out)
    if report.beta_qu is not None and not report.beta_qu_certified:
        print("error: quantum bound not certified within the iteration budget",
              file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def _cmd_verify_quantum(args: argparse.Namespace) -> int:
    hypergraph, status = _load_hypergraph(args.hypergraph)
    if hypergraph is None:
        return status
    try:
        model = parse_quantum_model(_read_text(args.model))
    except OSError as exc:
        print(f"error: cannot read {args.model}: {exc}", file=sys.stderr)
        return EXIT_IO
    except QuantumModelFormatError as exc:
        print(f"error: {args.model}: {exc}", file=sys.stderr)
        return EXIT_IO

    try:
        report = verify_quantum_model(hypergraph, model, tol=args.tol)
    except DimensionMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    lines = [f"instance: {hypergraph.name}", f"dimension: {model.dimension}"]
    if report.ok:
        value, _state = max_quantum_value(hypergraph, model)
        lines.append(f"projector checks: pass at tol {args.tol:g}")
        for ci, ctx in enumerate(hypergraph.contexts):
            lines.append(f"  context {ci} {{{', '.join(ctx)}}}: ok")
        lines.append(f"max quantum value: {format_float(value)}")
        _write_output("\n".join(lines) + "\n", args.out)
        return EXIT_OK
    lines.append("projector checks: FAIL")
    for finding in report.findings:
        lines.append(f"  {finding.severity}: {finding.location}: {finding.message}")
    _write_output("\n".join(lines) + "\n", args.out)
    return EXIT_VALIDATION


def _cmd_verify_onc(args: argparse.Namespace) -> int:
    hypergraph, status = _load_hypergraph(args.hypergraph)
    if hypergraph is None:
        return status
    try:
        model = parse_hv_model(_read_text(args.model), hypergraph)
    except OSError as exc:
        print(f"error: cannot read {args.model}: {exc}", file=sys.stderr)
        return EXIT_IO
    except HVModelFormatError as exc:
        print(f"error: {args.model}: {exc}", file=sys.stderr)
        return EXIT_IO

    report = validate_onc(hypergraph, model)
    lines = [f"instance: {hypergraph.name}", f"sample points: {model.size}"]
    lines.append(f"epsilon max: {format_rational(report.epsilon_max)}")
    if report.disagreements:
        lines.append("disagreement table (outcome, context, context') -> probability:")
        for (outcome, ca, cb), p in sorted(report.disagreements.items()):
            lines.append(f"  {outcome} [{ca} vs {cb}]: {format_rational(p)}")
    if not report.feasible:
        lines.append("per-context feasibility: FAIL")
        for ci, w in report.violations:
            lines.append(f"  context {ci} at sample point {w}: sum exceeds 1")
        _write_output("\n".join(lines) + "\n", args.out)
        return EXIT_VALIDATION

    collapsed = collapse(model)
    margins = collapse_margins(hypergraph, model, collapsed)
    lines.append("collapse margins per outcome (bound - probability):")
    for outcome in hypergraph.outcomes:
        entry = margins[outcome]
        lines.append(
            f"  {outcome}: probability {format_rational(entry.probability)}"
            f" <= bound {format_rational(entry.bound)}"
            f" (margin {format_rational(entry.margin)})"
        )
    choice = default_context_choice(hypergraph)
    t = expectations(model, choice)
    total = sum(
        (hypergraph.weight(o) * t[o] for o in hypergraph.outcomes), Fraction(0)
    )
    bound = robust_bound(hypergraph, report.epsilon_max)
    lines.append(
        f"weighted expectation sum (first-context choice):"
        f" {format_rational(total)} <= robust bound {format_rational(bound)}"
    )
    _write_output("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_simulate(args: argparse.Namespace) -> int:
    hypergraph, status = _load_hypergraph(args.hypergraph)
    if hypergraph is None:
        return status
    eps = Fraction(args.epsilon)
    seed = _default_seed(args.seed)
    slope = epsilon_slope(hypergraph)

    worst_collapse = None
    worst_robust = None
    max_total = Fraction(0)
    max_eps_measured = Fraction(0)
    for trial in range(args.trials):
        model = sample_onc(hypergraph, eps, seed + trial, args.size)
        report = validate_onc(hypergraph, model)
        max_eps_measured = max(max_eps_measured, report.epsilon_max)
        margins = collapse_margins(hypergraph, model, collapse(model))
        trial_margin = min(entry.margin for entry in margins.values())
        worst_collapse = (
            trial_margin if worst_collapse is None else min(worst_collapse, trial_margin)
        )

        choice = default_context_choice(hypergraph)
        t = expectations(model, choice)
        total = sum(
            (hypergraph.weight(o) * t[o] for o in hypergraph.outcomes), Fraction(0)
        )
        max_total = max(max_total, total)
        bound = robust_bound(hypergraph, report.epsilon_max)
        trial_slack = bound - total
        worst_robust = (
            trial_slack if worst_robust is None else min(worst_robust, trial_slack)
        )

    doc = {
        "schema_version": 1,
        "instance": hypergraph.name,
        "epsilon": format_rational(eps),
        "seed": seed,
        "size": args.size,
        "trials": args.trials,
        "epsilon_slope": format_rational(slope),
        "max_epsilon_measured": format_rational(max_eps_measured),
        "min_collapse_margin": format_rational(worst_collapse or Fraction(0)),
        "min_robustness_margin": format_rational(worst_robust or Fraction(0)),
        "max_expectation_sum": format_rational(max_total),
        "robust_bound_at_nominal": format_rational(robust_bound(hypergraph, eps)),
    }
    if args.format == "json":
        text = json.dumps(doc, indent=2) + "\n"
    else:
        text = "\n".join(f"{key}: {value}" for key, value in doc.items()) + "\n"
    _write_output(text, args.out)
    return EXIT_OK


def _cmd_instances_emit(args: argparse.Namespace) -> int:
    try:
        hypergraph, model, _state = build_instance(args.name)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        stem = hypergraph.name
        (out_dir / f"{stem}.hypergraph.json").write_text(
            emit_hypergraph(hypergraph), encoding="utf-8"
        )
        written = [f"{stem}.hypergraph.json"]
        if model is not None:
            from .quantum import emit_quantum_model

            (out_dir / f"{stem}.quantum.json").write_text(
                emit_quantum_model(model), encoding="utf-8"
            )
            written.append(f"{stem}.quantum.json")
    except OSError as exc:
        print(f"error: cannot write to {out_dir}: {exc}", file=sys.stderr)
        return EXIT_IO
    for name in written:
        print(f"wrote {out_dir / name}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctxbounds",
        description="Bounds of non-contextual inequalities on context hypergraphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="compute bound report for a hypergraph")
    analyze.add_argument("hypergraph")
    analyze.add_argument("--bounds", default="all", help="comma list of cl,g,qu or all")
    analyze.add_argument("--target", default=None,
                         help="'qu' or a number: critical-epsilon target")
    analyze.add_argument("--epsilon", default=None,
                         help="rational p/q: report the robust bound at this eps")
    analyze.add_argument("--format", choices=("text", "json"), default="text")
    analyze.add_argument("--out", default=None)
    analyze.add_argument("--tol", type=float, default=1e-6,
                         help="certification tolerance for the quantum bound")
    analyze.add_argument("--sdp-iters", type=int, default=DEFAULT_SDP_ITERS)
    analyze.set_defaults(func=_cmd_analyze)

    vq = sub.add_parser("verify-quantum", help="verify a projector model file")
    vq.add_argument("hypergraph")
    vq.add_argument("model")
    vq.add_argument("--tol", type=float, default=1e-9)
    vq.add_argument("--out", default=None)
    vq.set_defaults(func=_cmd_verify_quantum)

    vo = sub.add_parser("verify-onc", help="verify a hidden-variable model file")
    vo.add_argument("hypergraph")
    vo.add_argument("model")
    vo.add_argument("--out", default=None)
    vo.set_defaults(func=_cmd_verify_onc)

    sim = sub.add_parser("simulate", help="batch-generate models and check margins")
    sim.add_argument("hypergraph")
    sim.add_argument("--epsilon", required=True, help="rational p/q flip rate")
    sim.add_argument("--seed", type=int, default=None,
                     help="defaults to CTXBOUNDS_SEED or 0")
    sim.add_argument("--size", type=int, default=100)
    sim.add_argument("--trials", type=int, default=10)
    sim.add_argument("--format", choices=("text", "json"), default="text")
    sim.add_argument("--out", default=None)
    sim.set_defaults(func=_cmd_simulate)

    inst = sub.add_parser("instances", help="built-in instance library")
    inst_sub = inst.add_subparsers(dest="instances_command", required=True)
    emit = inst_sub.add_parser("emit", help="write instance files")
    emit.add_argument("name", help="kcbs-pentagon | peres-mermin-24 | cycle-<n>")
    emit.add_argument("--out", required=True, help="output directory")
    emit.set_defaults(func=_cmd_instances_emit)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
