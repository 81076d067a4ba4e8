"""JSON encoding/decoding for problem descriptions and reports.

Conventions (documented in the README): complex numbers are [re, im] pairs,
group elements are residue arrays, floats use shortest round-trip decimals,
and every report is emitted with a fixed field order so identical inputs
produce byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Any

import numpy as np

from .context import ModulationContext
from .errors import ValidationError
from .frames import MEASURE_COUNTING, MEASURE_NORMALIZED, FrameReport
from .groups import DUAL, PRIMAL, GroupSpec, GroupElement
from .metric import MetricReport
from .spaces import RangeFunction
from .transforms import FiberMatrix, Signal


def _coerce_scalar(obj: Any) -> Any:
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def dump_json(obj: Any) -> str:
    """Deterministic rendering: insertion order preserved, one-line output."""
    return json.dumps(obj, separators=(", ", ": "), allow_nan=False, default=_coerce_scalar)


def complex_pair(z: complex) -> list[float]:
    return [float(np.real(z)), float(np.imag(z))]


def signal_to_json(f: Signal) -> list[list[float]]:
    return [complex_pair(z) for z in f.values]


def group_to_json(group: GroupSpec) -> dict:
    return {"factors": list(group.factors)}


def element_to_json(el: GroupElement) -> list[int]:
    return list(el.residues)


def fiber_matrix_to_json(fm: FiberMatrix) -> dict:
    return {
        "pi": [element_to_json(r) for r in fm.pi.representatives],
        "d": [element_to_json(r) for r in fm.d.representatives],
        "rows": [[complex_pair(z) for z in row] for row in fm.entries],
    }


def range_function_to_json(rf: RangeFunction) -> dict:
    return {
        "dims": list(rf.dims),
        "bases": [
            [[complex_pair(z) for z in basis[:, j]] for j in range(basis.shape[1])]
            for basis in rf.bases
        ],
    }


def frame_report_to_json(report: FrameReport, ctx: ModulationContext) -> dict:
    per_fiber = []
    if report.fiber_lower is not None:
        for x, rep in enumerate(ctx.pi.representatives):
            per_fiber.append(
                {
                    "x": element_to_json(rep),
                    "A": float(report.fiber_lower[x]),
                    "B": float(report.fiber_upper[x]),
                    "dim": int(report.fiber_dims[x]),
                }
            )
    return {
        "per_fiber": per_fiber,
        "system": {
            "A": report.lower,
            "B": report.upper,
            "parseval": report.is_parseval,
            "riesz": report.is_riesz,
        },
        "measure": report.measure,
    }


def metric_report_to_json(report: MetricReport, ctx: ModulationContext) -> dict:
    return {
        "theta": report.theta,
        "per_fiber": [float(v) for v in report.per_fiber],
        "argmax_x": element_to_json(ctx.pi.representatives[report.argmax_fiber]),
    }


# ---- input parsing ----


@dataclass
class ProblemDescription:
    """Parsed CLI input: group, modulation generators, named signals, and
    command-specific selections."""

    group: GroupSpec
    lam_generators: list[GroupElement]
    signals: dict[str, Signal]
    generators: list[str] | None = None
    other_generators: list[str] | None = None
    signal: str | None = None
    support: list[GroupElement] | None = None
    spanning_set: list[str] | None = None
    spaces: list[list[str]] | None = None
    tolerance: float | None = None
    measure: str | None = None
    raw: dict = dc_field(default_factory=dict)


def _expect(condition: bool, path: str, message: str) -> None:
    if not condition:
        raise ValidationError(f"{path}: {message}")


def _parse_residues(obj: Any, group: GroupSpec, path: str, side: str) -> GroupElement:
    _expect(isinstance(obj, (list, tuple)), path, "expected a residue array")
    _expect(
        len(obj) == len(group.factors),
        path,
        f"expected {len(group.factors)} residues, got {len(obj)}",
    )
    for i, r in enumerate(obj):
        _expect(isinstance(r, int) or (isinstance(r, float) and float(r).is_integer()),
                f"{path}[{i}]", "residue must be an integer")
    return group.element(tuple(int(r) for r in obj), side)


def _parse_signal(obj: Any, group: GroupSpec, path: str) -> Signal:
    _expect(isinstance(obj, list), path, "expected an array of [re, im] pairs")
    _expect(
        len(obj) == group.order,
        path,
        f"signal length {len(obj)} != group order {group.order}",
    )
    values = np.empty(group.order, dtype=np.complex128)
    for i, pair in enumerate(obj):
        _expect(
            isinstance(pair, list) and len(pair) == 2,
            f"{path}[{i}]",
            "expected an [re, im] pair",
        )
        re, im = pair
        _expect(isinstance(re, (int, float)), f"{path}[{i}][0]", "expected a number")
        _expect(isinstance(im, (int, float)), f"{path}[{i}][1]", "expected a number")
        values[i] = complex(float(re), float(im))
    return Signal(group, PRIMAL, values)


def _parse_name_list(obj: Any, signals: dict[str, Signal], path: str) -> list[str]:
    _expect(isinstance(obj, list), path, "expected a list of signal names")
    names = []
    for i, name in enumerate(obj):
        _expect(isinstance(name, str), f"{path}[{i}]", "expected a signal name string")
        _expect(name in signals, f"{path}[{i}]", f"unknown signal {name!r}")
        names.append(name)
    return names


def parse_problem(obj: Any) -> ProblemDescription:
    """Validate a raw JSON object into a ProblemDescription.

    Raises ValidationError with a path-qualified message on the first
    offending field.
    """
    _expect(isinstance(obj, dict), "$", "input must be a JSON object")
    _expect("group" in obj, "group", "missing required field")
    group_obj = obj["group"]
    _expect(isinstance(group_obj, dict), "group", "expected an object")
    _expect("factors" in group_obj, "group.factors", "missing required field")
    factors = group_obj["factors"]
    _expect(isinstance(factors, list) and factors, "group.factors", "expected a non-empty list")
    for i, n in enumerate(factors):
        _expect(isinstance(n, int) and n >= 2, f"group.factors[{i}]", "expected an integer >= 2")
    group = GroupSpec(tuple(int(n) for n in factors))

    lam_generators = []
    for i, g in enumerate(obj.get("lambda_generators", [])):
        lam_generators.append(_parse_residues(g, group, f"lambda_generators[{i}]", DUAL))

    signals: dict[str, Signal] = {}
    sig_obj = obj.get("signals", {})
    _expect(isinstance(sig_obj, dict), "signals", "expected an object mapping names to signals")
    for name, data in sig_obj.items():
        signals[name] = _parse_signal(data, group, f"signals.{name}")

    desc = ProblemDescription(group=group, lam_generators=lam_generators, signals=signals, raw=obj)

    if "generators" in obj:
        desc.generators = _parse_name_list(obj["generators"], signals, "generators")
    if "other_generators" in obj:
        desc.other_generators = _parse_name_list(obj["other_generators"], signals, "other_generators")
    if "spanning_set" in obj:
        desc.spanning_set = _parse_name_list(obj["spanning_set"], signals, "spanning_set")
    if "signal" in obj:
        _expect(isinstance(obj["signal"], str), "signal", "expected a signal name string")
        _expect(obj["signal"] in signals, "signal", f"unknown signal {obj['signal']!r}")
        desc.signal = obj["signal"]
    if "support" in obj:
        _expect(isinstance(obj["support"], list), "support", "expected a list of residue arrays")
        desc.support = [
            _parse_residues(p, group, f"support[{i}]", PRIMAL)
            for i, p in enumerate(obj["support"])
        ]
    if "spaces" in obj:
        _expect(isinstance(obj["spaces"], list), "spaces", "expected a list of generator-name lists")
        desc.spaces = [
            _parse_name_list(entry, signals, f"spaces[{i}]")
            for i, entry in enumerate(obj["spaces"])
        ]
    if "tolerance" in obj:
        tol = obj["tolerance"]
        _expect(isinstance(tol, (int, float)) and tol > 0, "tolerance", "expected a positive number")
        desc.tolerance = float(tol)
    if "measure" in obj:
        _expect(
            obj["measure"] in (MEASURE_NORMALIZED, MEASURE_COUNTING),
            "measure",
            f"expected '{MEASURE_NORMALIZED}' or '{MEASURE_COUNTING}'",
        )
        desc.measure = obj["measure"]
    return desc
