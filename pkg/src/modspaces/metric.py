"""The modulation metric on spaces sharing a context, plus the constructive
topology probes: nested-chain distances, dimension rigidity, and limits of
Cauchy sequences of spaces.

The distance between two spaces is the maximum over fibers of the spectral
norm of the difference of the range-function projections; it always lies in
[0, 1], and per-fiber values below EQUALITY_TOL are snapped to exact zero so
that equal range functions give distance exactly 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NotCauchyError, PreconditionError
from .spaces import (
    ModInvariantSpace,
    RangeFunction,
    membership,
    mod_invariant_space,
    range_function_from_generators,
)
from .transforms import FiberMatrix, inverse_mod_zak

EQUALITY_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class MetricReport:
    """Distance plus the per-fiber projection-difference norms behind it."""

    theta: float
    per_fiber: np.ndarray
    argmax_fiber: int


def _fiber_norm(p: np.ndarray, q: np.ndarray) -> float:
    """Spectral norm of p - q, computed through the squared difference.

    Squaring first makes the value exactly symmetric in the arguments
    (floating-point products of negated entries are bitwise identical).
    """
    diff = p - q
    if diff.size == 0:
        return 0.0
    eigs = np.linalg.eigvalsh(diff @ diff.conj().T)
    top = max(float(eigs[-1]), 0.0)
    return float(np.sqrt(top))


def mod_metric(v: ModInvariantSpace, w: ModInvariantSpace) -> MetricReport:
    """Modulation distance between two spaces over the same context."""
    v.context.require_same(w.context)
    n_fibers = v.context.fiber_count
    values = np.zeros(n_fibers)
    for x in range(n_fibers):
        val = _fiber_norm(v.range_function.projection(x), w.range_function.projection(x))
        if val < EQUALITY_TOL:
            val = 0.0
        values[x] = min(val, 1.0)
    argmax = int(np.argmax(values)) if n_fibers else 0
    theta = float(values[argmax]) if n_fibers else 0.0
    return MetricReport(theta=theta, per_fiber=values, argmax_fiber=argmax)


def nested_distance_check(v: ModInvariantSpace, w: ModInvariantSpace) -> float:
    """Distance between a space and a strictly larger one containing it.

    Verifies v is strictly contained in w first (generator membership and a
    strictly smaller total dimension); strict fiber inclusion forces the
    projection difference to have norm 1 on that fiber.
    """
    v.context.require_same(w.context)
    for g in v.generators:
        if not membership(g, w).member:
            raise PreconditionError("first space is not contained in the second")
    if v.dimension >= w.dimension:
        raise PreconditionError("containment is not strict")
    return mod_metric(v, w).theta


def dimension_rigidity_check(v: ModInvariantSpace, w: ModInvariantSpace) -> bool:
    """Predicate: distance < 1 forces pointwise equal fiber dimensions."""
    theta = mod_metric(v, w).theta
    if theta < 1.0 - 1e-9:
        return v.dims == w.dims
    return True


def minimal_generator_count(space: ModInvariantSpace) -> int:
    """Smallest number of generators, which is the largest fiber dimension."""
    return max(space.dims, default=0)


def _generators_from_range_function(
    ctx, rf: RangeFunction
) -> tuple:
    """Dimension-graded generators whose fibers are the basis columns."""
    dims = rf.dims
    count = max(dims, default=0)
    gens = []
    for n in range(1, count + 1):
        field = np.zeros((ctx.fiber_count, ctx.fiber_dim), dtype=np.complex128)
        for x, dim_x in enumerate(dims):
            if dim_x >= n:
                field[x] = rf.bases[x][:, n - 1]
        gens.append(inverse_mod_zak(FiberMatrix(ctx, field)))
    return tuple(gens)


def cauchy_limit(
    spaces: Sequence[ModInvariantSpace], tol: float
) -> ModInvariantSpace:
    """Limit of a sequence of spaces whose consecutive distances settle
    below ``tol``.

    The tail's fiber projections are averaged and rounded to the nearest
    orthogonal projection (eigenvalues snapped to {0,1} at threshold 1/2);
    the limit space is rebuilt from dimension-graded generators of the
    resulting range function.
    """
    spaces = list(spaces)
    if not spaces:
        raise PreconditionError("cauchy_limit needs at least one space")
    if tol <= 0:
        raise PreconditionError("tolerance must be positive")
    ctx = spaces[0].context
    for s in spaces[1:]:
        ctx.require_same(s.context)

    consecutive = [
        mod_metric(spaces[i], spaces[i + 1]).theta for i in range(len(spaces) - 1)
    ]
    tail_start = len(spaces) - 1
    while tail_start > 0 and consecutive[tail_start - 1] < tol:
        tail_start -= 1
    if len(spaces) > 1 and tail_start == len(spaces) - 1:
        raise NotCauchyError(
            f"consecutive distances never settle below tol={tol}: {consecutive}"
        )
    tail = spaces[tail_start:]

    bases = []
    for x in range(ctx.fiber_count):
        mean = np.zeros((ctx.fiber_dim, ctx.fiber_dim), dtype=np.complex128)
        for s in tail:
            mean += s.range_function.projection(x)
        mean /= len(tail)
        eigvals, eigvecs = np.linalg.eigh(mean)
        keep = eigvals >= 0.5
        bases.append(np.ascontiguousarray(eigvecs[:, keep]))
    limit_rf = RangeFunction(ctx.pi, tuple(bases))
    generators = _generators_from_range_function(ctx, limit_rf)
    return mod_invariant_space(ctx, generators)
