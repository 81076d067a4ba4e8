"""Frame and Riesz-basis analysis of modulation systems {M_l phi}.

Two routes compute the same bounds: per-fiber singular values of the
generator fiber matrices, and a dense brute-force route through the singular
values of the ambient system matrix.  Under the measure convention
"normalized" (weight 1/|lam| per modulate) the two routes agree with equal
constants; under "counting" both scale by |lam|.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .context import ModulationContext
from .errors import PreconditionError, SizeGuardError, StructureMismatchError
from .spaces import RANK_RTOL
from .transforms import Signal, mod_zak_stack

MEASURE_NORMALIZED = "normalized"
MEASURE_COUNTING = "counting"
PARSEVAL_TOL = 1e-8
MAX_ORACLE_ORDER = 4096


def _measure_weight(measure: str, lam_order: int) -> float:
    if measure == MEASURE_NORMALIZED:
        return 1.0 / lam_order
    if measure == MEASURE_COUNTING:
        return 1.0
    raise PreconditionError(f"unknown measure {measure!r}")


@dataclass(frozen=True, eq=False)
class FrameReport:
    """Fiberwise and system-level frame bounds for a modulation system.

    ``fiber_lower``/``fiber_upper`` hold per-fiber bounds (0.0 on fibers whose
    span is trivial; those are skipped for the system bounds).  They are None
    for the brute-force route, which only sees the ambient spectrum.
    """

    lower: float
    upper: float
    is_frame: bool
    is_parseval: bool
    is_riesz: bool
    measure: str
    fiber_lower: np.ndarray | None = None
    fiber_upper: np.ndarray | None = None
    fiber_dims: tuple[int, ...] | None = None


def _report_from_sigma_sq(
    lower: float,
    upper: float,
    vacuous: bool,
    riesz: bool,
    measure: str,
    fiber_lower: np.ndarray | None = None,
    fiber_upper: np.ndarray | None = None,
    fiber_dims: tuple[int, ...] | None = None,
) -> FrameReport:
    is_frame = True  # finite systems always frame their span; bounds say how well
    is_parseval = vacuous or (abs(lower - 1.0) < PARSEVAL_TOL and abs(upper - 1.0) < PARSEVAL_TOL)
    return FrameReport(
        lower=lower,
        upper=upper,
        is_frame=is_frame,
        is_parseval=is_parseval,
        is_riesz=riesz,
        measure=measure,
        fiber_lower=fiber_lower,
        fiber_upper=fiber_upper,
        fiber_dims=fiber_dims,
    )


def fiber_frame_bounds(
    generators: Sequence[Signal],
    ctx: ModulationContext,
    measure: str = MEASURE_NORMALIZED,
) -> FrameReport:
    """Bounds from the nonzero singular values of each fiber generator matrix.

    The singular-value cutoff is RANK_RTOL times the largest singular value
    over all fibers, the same rank rule the range functions use.
    """
    if not generators:
        raise PreconditionError("frame analysis needs at least one generator")
    stack = mod_zak_stack(list(generators), ctx)      # (m, |Pi|, |D|)
    m, n_fibers, _ = stack.shape
    scale = _measure_weight(measure, ctx.lam.order) * ctx.lam.order

    sigmas = [np.linalg.svd(stack[:, x, :].T, compute_uv=False) for x in range(n_fibers)]
    sigma_max = max((float(s[0]) for s in sigmas if s.size), default=0.0)
    cutoff = RANK_RTOL * sigma_max

    fiber_lower = np.zeros(n_fibers)
    fiber_upper = np.zeros(n_fibers)
    dims = []
    riesz_everywhere = True
    for x, s in enumerate(sigmas):
        nz = s[s > cutoff]
        dims.append(int(nz.size))
        if nz.size:
            fiber_lower[x] = float(nz[-1] ** 2) * scale
            fiber_upper[x] = float(nz[0] ** 2) * scale
        # full column rank needs m singular values above the cutoff
        if nz.size < m:
            riesz_everywhere = False

    active = [x for x in range(n_fibers) if dims[x] > 0]
    vacuous = not active
    lower = min((fiber_lower[x] for x in active), default=0.0)
    upper = max((fiber_upper[x] for x in active), default=0.0)
    riesz = True if vacuous else riesz_everywhere
    return _report_from_sigma_sq(
        lower,
        upper,
        vacuous,
        riesz,
        measure,
        fiber_lower=fiber_lower,
        fiber_upper=fiber_upper,
        fiber_dims=tuple(dims),
    )


def modulation_system_matrix(
    generators: Sequence[Signal],
    ctx: ModulationContext,
    weight: float = 1.0,
) -> np.ndarray:
    """(|G|, |lam|*m) matrix whose columns are sqrt(weight) * M_l phi_j,
    generator-major, subgroup elements in canonical order."""
    cols = []
    table = ctx.modulation_table                      # (|lam|, |G|)
    for f in generators:
        if f.group.factors != ctx.group.factors:
            raise StructureMismatchError("generator group does not match the context")
        cols.append(table * f.values[None, :])        # (|lam|, |G|)
    if not cols:
        return np.zeros((ctx.group.order, 0), dtype=np.complex128)
    system = np.concatenate(cols, axis=0).T
    return system * np.sqrt(weight)


def brute_force_frame_bounds(
    generators: Sequence[Signal],
    ctx: ModulationContext,
    measure: str = MEASURE_NORMALIZED,
) -> FrameReport:
    """Dense oracle: singular values of the ambient modulation system matrix.

    Restricted to the system's span, the frame operator's spectrum is exactly
    the nonzero squared singular values; the Riesz flag is the ambient
    linear-independence of all |lam|*m system vectors.
    """
    if not generators:
        raise PreconditionError("frame analysis needs at least one generator")
    if ctx.group.order > MAX_ORACLE_ORDER:
        raise SizeGuardError(
            f"group order {ctx.group.order} exceeds the dense-oracle cap {MAX_ORACLE_ORDER}"
        )
    weight = _measure_weight(measure, ctx.lam.order)
    system = modulation_system_matrix(list(generators), ctx, weight)
    sigma = np.linalg.svd(system, compute_uv=False)
    sigma_max = float(sigma[0]) if sigma.size else 0.0
    cutoff = RANK_RTOL * sigma_max
    nz = sigma[sigma > cutoff]
    vacuous = nz.size == 0
    lower = float(nz[-1] ** 2) if nz.size else 0.0
    upper = float(nz[0] ** 2) if nz.size else 0.0
    riesz = True if vacuous else bool(nz.size == system.shape[1])
    return _report_from_sigma_sq(lower, upper, vacuous, riesz, measure)


@dataclass(frozen=True, eq=False)
class RieszReport:
    """Riesz decision plus the per-fiber minimal singular values behind it."""

    is_riesz: bool
    fiber_min_singular: np.ndarray
    cutoff: float

    def __bool__(self) -> bool:
        return self.is_riesz


def is_riesz_basis(generators: Sequence[Signal], ctx: ModulationContext) -> RieszReport:
    """True iff the full fiber matrix has independent columns at every fiber.

    That fiberwise condition is equivalent to ambient linear independence of
    the whole modulation system (a vanishing or dependent fiber anywhere
    produces an ambient dependency).  The zero system is vacuously a basis of
    the zero space.
    """
    stack = mod_zak_stack(list(generators), ctx)
    m, n_fibers, _ = stack.shape
    if m == 0:
        return RieszReport(True, np.zeros(n_fibers), 0.0)
    mins = np.zeros(n_fibers)
    sigma_max = 0.0
    for x in range(n_fibers):
        s = np.linalg.svd(stack[:, x, :].T, compute_uv=False)
        # m-th singular value of the fiber matrix; 0 when fewer than m exist
        mins[x] = float(s[m - 1]) if s.size >= m else 0.0
        if s.size:
            sigma_max = max(sigma_max, float(s[0]))
    cutoff = RANK_RTOL * sigma_max
    if sigma_max == 0.0:
        return RieszReport(True, mins, cutoff)   # all fibers vanish: zero space
    return RieszReport(bool(np.all(mins > cutoff)), mins, cutoff)
