"""Batch command-line front end.

One JSON problem description in (file or stdin), one deterministic JSON
report out.  Exit codes: 0 success, 1 validation error, 2 numerical guard
(size caps, non-Cauchy input, failed self-checks).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .context import ModulationContext, build_context
from .decomposition import principal_decompose, verify_decomposition
from .diagnostics import run_demo, run_selftest
from .errors import GuardError, SizeGuardError, ValidationError
from .frames import MAX_ORACLE_ORDER, MEASURE_NORMALIZED, fiber_frame_bounds
from .jsonio import (
    ProblemDescription,
    dump_json,
    element_to_json,
    frame_report_to_json,
    group_to_json,
    metric_report_to_json,
    parse_problem,
    range_function_to_json,
    signal_to_json,
)
from .metric import cauchy_limit, mod_metric
from .spaces import (
    ModInvariantSpace,
    is_modulation_invariant,
    membership,
    mod_invariant_space,
    space_from_support,
)

DEFAULT_MEMBERSHIP_TOL = 1e-9
INPUT_COMMANDS = (
    "analyze",
    "membership",
    "frame-bounds",
    "decompose",
    "metric",
    "limit",
    "invariance-check",
)
COMMANDS = INPUT_COMMANDS + ("demo", "selftest")


def _context_of(desc: ProblemDescription) -> ModulationContext:
    return build_context(desc.group, desc.lam_generators)


def _space_from_names(
    desc: ProblemDescription, ctx: ModulationContext, names: Sequence[str] | None, path: str
) -> ModInvariantSpace:
    if names is not None:
        return mod_invariant_space(ctx, [desc.signals[n] for n in names])
    if desc.support is not None:
        return space_from_support(ctx, desc.support)
    raise ValidationError(f"{path}: missing required field (or provide 'support')")


def _header(command: str, desc: ProblemDescription) -> dict:
    return {
        "command": command,
        "group": group_to_json(desc.group),
        "lambda_generators": [element_to_json(g) for g in desc.lam_generators],
    }


def _cmd_analyze(desc: ProblemDescription, args) -> dict:
    ctx = _context_of(desc)
    space = _space_from_names(desc, ctx, desc.generators, "generators")
    out = _header("analyze", desc)
    out.update(
        {
            "pi": [element_to_json(r) for r in ctx.pi.representatives],
            "d": [element_to_json(r) for r in ctx.d.representatives],
            "dims": list(space.dims),
            "total_dim": space.dimension,
            "range_function": range_function_to_json(space.range_function),
        }
    )
    return out


def _cmd_membership(desc: ProblemDescription, args) -> dict:
    ctx = _context_of(desc)
    space = _space_from_names(desc, ctx, desc.generators, "generators")
    if desc.signal is None:
        raise ValidationError("signal: missing required field")
    tol = args.tolerance or desc.tolerance or DEFAULT_MEMBERSHIP_TOL
    result = membership(desc.signals[desc.signal], space, rtol=tol)
    out = _header("membership", desc)
    out.update(
        {
            "signal": desc.signal,
            "member": result.member,
            "max_residual": result.max_residual,
            "tolerance": tol,
        }
    )
    return out


def _cmd_frame_bounds(desc: ProblemDescription, args) -> dict:
    ctx = _context_of(desc)
    if desc.generators is None:
        raise ValidationError("generators: missing required field")
    measure = args.measure or desc.measure or MEASURE_NORMALIZED
    report = fiber_frame_bounds([desc.signals[n] for n in desc.generators], ctx, measure=measure)
    out = _header("frame-bounds", desc)
    out.update(frame_report_to_json(report, ctx))
    return out


def _cmd_decompose(desc: ProblemDescription, args) -> dict:
    ctx = _context_of(desc)
    space = _space_from_names(desc, ctx, desc.generators, "generators")
    dec = principal_decompose(space)
    report = verify_decomposition(space, dec)
    out = _header("decompose", desc)
    out.update(
        {
            "generator_count": len(dec),
            "generators": [signal_to_json(g) for g in dec.generators],
            "support_patterns": [
                [element_to_json(ctx.pi.representatives[x]) for x in pattern]
                for pattern in dec.support_patterns
            ],
            "verification": {
                "orthogonality_residual": report.orthogonality_residual,
                "space_dimension": report.space_dimension,
                "summand_dimensions": list(report.summand_dimensions),
                "dimension_ok": report.dimension_ok,
                "parseval_residual": report.parseval_residual,
                "reconstruction_residual": report.reconstruction_residual,
            },
        }
    )
    return out


def _cmd_metric(desc: ProblemDescription, args) -> dict:
    ctx = _context_of(desc)
    first = _space_from_names(desc, ctx, desc.generators, "generators")
    if desc.other_generators is None:
        raise ValidationError("other_generators: missing required field")
    second = mod_invariant_space(ctx, [desc.signals[n] for n in desc.other_generators])
    report = mod_metric(first, second)
    out = _header("metric", desc)
    out.update(metric_report_to_json(report, ctx))
    return out


def _cmd_limit(desc: ProblemDescription, args) -> dict:
    ctx = _context_of(desc)
    if desc.spaces is None:
        raise ValidationError("spaces: missing required field")
    tol = args.tolerance or desc.tolerance
    if tol is None:
        raise ValidationError("tolerance: missing required field (or pass --tolerance)")
    seq = [
        mod_invariant_space(ctx, [desc.signals[n] for n in names]) for names in desc.spaces
    ]
    limit = cauchy_limit(seq, tol)
    consecutive = [mod_metric(seq[i], seq[i + 1]).theta for i in range(len(seq) - 1)]
    tail_theta = [mod_metric(s, limit).theta for s in seq]
    out = _header("limit", desc)
    out.update(
        {
            "tolerance": tol,
            "consecutive_theta": consecutive,
            "limit": {
                "generators": [signal_to_json(g) for g in limit.generators],
                "dims": list(limit.dims),
            },
            "theta_to_limit": tail_theta,
        }
    )
    return out


def _cmd_invariance_check(desc: ProblemDescription, args) -> dict:
    ctx = _context_of(desc)
    if ctx.group.order > MAX_ORACLE_ORDER:
        raise SizeGuardError(
            f"group order {ctx.group.order} exceeds the dense-oracle cap {MAX_ORACLE_ORDER}"
        )
    if desc.spanning_set is None:
        raise ValidationError("spanning_set: missing required field")
    invariant = is_modulation_invariant(
        [desc.signals[n] for n in desc.spanning_set], ctx.lam
    )
    out = _header("invariance-check", desc)
    out["invariant"] = invariant
    return out


_HANDLERS = {
    "analyze": _cmd_analyze,
    "membership": _cmd_membership,
    "frame-bounds": _cmd_frame_bounds,
    "decompose": _cmd_decompose,
    "metric": _cmd_metric,
    "limit": _cmd_limit,
    "invariance-check": _cmd_invariance_check,
}


def _read_input(args) -> dict:
    if args.input and args.input != "-":
        try:
            with open(args.input, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ValidationError(f"input: cannot read {args.input!r}: {exc}") from exc
    else:
        text = sys.stdin.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"input: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _emit(args, payload: dict) -> None:
    text = dump_json(payload) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modspaces",
        description="Modulation-invariant subspace analysis on finite abelian groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", default=None, help="input JSON path ('-' or omitted: stdin)")
        p.add_argument("--output", default=None, help="output path (default: stdout)")
        p.add_argument("--tolerance", type=float, default=None, help="tolerance override")
        p.add_argument(
            "--measure",
            choices=("normalized", "counting"),
            default=None,
            help="frame-bound measure convention",
        )
        if name == "selftest":
            p.add_argument("--seed", type=int, default=20240501)
            p.add_argument("--scale", type=int, default=1, help="instance count multiplier")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "demo":
            payload = run_demo()
            _emit(args, payload)
            return 0 if payload["all_ok"] else 2
        if args.command == "selftest":
            payload = run_selftest(seed=args.seed, scale=args.scale)
            _emit(args, payload)
            return 0 if payload["all_ok"] else 2
        desc = parse_problem(_read_input(args))
        payload = _HANDLERS[args.command](desc, args)
        _emit(args, payload)
        return 0
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except GuardError as exc:
        print(f"guard: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
