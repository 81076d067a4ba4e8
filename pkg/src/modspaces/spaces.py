"""Range functions and modulation-invariant spaces.

A space is stored fiberwise: for each representative x of the primal section,
an orthonormal basis of the span of the generators' fibers at x.  Membership,
projection, and the support-space construction all act through that picture.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .context import ModulationContext
from .errors import PreconditionError, StructureMismatchError
from .groups import DUAL, PRIMAL, GroupElement, Section, Subgroup
from .transforms import (
    FiberMatrix,
    Signal,
    character_on_group,
    fiberization,
    fiberization_stack,
    inverse_mod_zak,
    inverse_mod_zak_batch,
    mod_zak,
    mod_zak_batch,
    mod_zak_stack,
)

RANK_RTOL = 1e-9
MEMBERSHIP_RTOL = 1e-9


def orthonormal_columns(vectors: Sequence[np.ndarray], tol: float) -> np.ndarray:
    """Modified Gram-Schmidt in list order with one reorthogonalization pass.

    Vectors whose residual norm falls at or below ``tol`` are dropped; the
    result has orthonormal columns (Gram residual < 1e-10 thanks to the
    second pass).
    """
    basis: list[np.ndarray] = []
    dim = len(vectors[0]) if len(vectors) else 0
    for v in vectors:
        w = np.array(v, dtype=np.complex128)
        for _ in range(2):
            for b in basis:
                w -= (b.conj() @ w) * b
        nrm = np.linalg.norm(w)
        if nrm > tol:
            basis.append(w / nrm)
    if not basis:
        return np.zeros((dim, 0), dtype=np.complex128)
    return np.column_stack(basis)


@dataclass(frozen=True, eq=False)
class RangeFunction:
    """Per-fiber orthonormal bases: bases[x] is (fiber_dim, dims[x])."""

    pi: Section
    bases: tuple[np.ndarray, ...]

    @cached_property
    def dims(self) -> tuple[int, ...]:
        return tuple(b.shape[1] for b in self.bases)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def projection(self, x_pos: int) -> np.ndarray:
        b = self.bases[x_pos]
        return b @ b.conj().T

    def project_fiber(self, x_pos: int, v: np.ndarray) -> np.ndarray:
        b = self.bases[x_pos]
        return b @ (b.conj().T @ v)

    def residual_fiber(self, x_pos: int, v: np.ndarray) -> float:
        return float(np.linalg.norm(v - self.project_fiber(x_pos, v)))


def range_function_from_fiber_stack(pi: Section, stack: np.ndarray) -> RangeFunction:
    """Range function from an (m, |Pi|, dim) stack of generator fibers.

    Fiber spans are orthonormalized per x by Gram-Schmidt in generator order;
    the rank tolerance is RANK_RTOL times the largest fiber norm over all x.
    """
    m, n_fibers, dim = stack.shape
    if m == 0:
        empty = np.zeros((dim, 0), dtype=np.complex128)
        return RangeFunction(pi, tuple(empty for _ in range(n_fibers)))
    max_norm = float(np.max(np.linalg.norm(stack, axis=2))) if stack.size else 0.0
    tol = RANK_RTOL * max_norm
    bases = tuple(
        orthonormal_columns([stack[j, x] for j in range(m)], tol) for x in range(n_fibers)
    )
    return RangeFunction(pi, bases)


def range_function_from_generators(
    generators: Sequence[Signal], ctx: ModulationContext
) -> RangeFunction:
    """Fiberwise span of the generators' mod_zak images."""
    stack = mod_zak_stack(generators, ctx)
    if stack.shape[0] == 0:
        stack = np.zeros((0, ctx.fiber_count, ctx.fiber_dim), dtype=np.complex128)
    return range_function_from_fiber_stack(ctx.pi, stack)


@dataclass(frozen=True, eq=False)
class ModInvariantSpace:
    """Closed subspace invariant under modulations by the context subgroup,
    held as generators plus the derived range function."""

    context: ModulationContext
    generators: tuple[Signal, ...]
    range_function: RangeFunction

    @property
    def dims(self) -> tuple[int, ...]:
        return self.range_function.dims

    @property
    def dimension(self) -> int:
        return self.range_function.total_dim

    def is_zero(self) -> bool:
        return self.dimension == 0


def mod_invariant_space(
    ctx: ModulationContext, generators: Iterable[Signal]
) -> ModInvariantSpace:
    gens = tuple(generators)
    for g in gens:
        if g.group.factors != ctx.group.factors:
            raise StructureMismatchError("generator group does not match the context")
        if g.side != PRIMAL:
            raise PreconditionError("space generators must be primal-side signals")
    return ModInvariantSpace(ctx, gens, range_function_from_generators(gens, ctx))


class MembershipResult(NamedTuple):
    member: bool
    max_residual: float

    def __bool__(self) -> bool:  # truthiness == the decision
        return self.member


def membership(
    f: Signal, space: ModInvariantSpace, rtol: float = MEMBERSHIP_RTOL
) -> MembershipResult:
    """Fiberwise test: f belongs iff every fiber of its mod_zak image lies in
    the range function, with residuals measured relative to ||f||."""
    ctx = space.context
    fm = mod_zak(f, ctx)
    rf = space.range_function
    residuals = [rf.residual_fiber(x, fm.entries[x]) for x in range(ctx.fiber_count)]
    max_res = max(residuals) if residuals else 0.0
    return MembershipResult(max_res <= rtol * f.norm, max_res)


def project(f: Signal, space: ModInvariantSpace) -> Signal:
    """Orthogonal projection onto the space, applied fiber by fiber."""
    ctx = space.context
    fm = mod_zak(f, ctx)
    rf = space.range_function
    projected = np.stack(
        [rf.project_fiber(x, fm.entries[x]) for x in range(ctx.fiber_count)]
    )
    return inverse_mod_zak(FiberMatrix(ctx, projected))


def space_from_support(
    ctx: ModulationContext, support: Iterable[GroupElement | Sequence[int] | int]
) -> ModInvariantSpace:
    """Space of all signals vanishing off the given support set.

    Only defined when the modulation subgroup is the whole dual group; then
    each fiber is one-dimensional and the space is generated by the deltas at
    the support points.
    """
    if ctx.lam.order != ctx.group.order:
        raise PreconditionError(
            "support spaces require the modulation subgroup to be the full dual group"
        )
    indices = set()
    for p in support:
        if isinstance(p, GroupElement):
            indices.add(p.index)
        elif isinstance(p, int):
            indices.add(p % ctx.group.order)
        else:
            indices.add(ctx.group.index_of(tuple(p)))
    gens = tuple(Signal.delta(ctx.group, idx) for idx in sorted(indices))
    return mod_invariant_space(ctx, gens)


def fiberization_range_function(
    generators: Sequence[Signal], ctx: ModulationContext
) -> RangeFunction:
    """Range function computed through the fiberization map instead of mod_zak.

    Same span machinery on the (|annihilator|)-dimensional fibers; membership
    decisions agree with the mod_zak route for every signal.
    """
    stack = fiberization_stack(list(generators), ctx)
    if stack.shape[0] == 0:
        stack = np.zeros((0, ctx.fiber_count, ctx.lam_star.order), dtype=np.complex128)
    return range_function_from_fiber_stack(ctx.pi, stack)


def fiberization_membership(
    f: Signal,
    rf: RangeFunction,
    ctx: ModulationContext,
    rtol: float = MEMBERSHIP_RTOL,
) -> MembershipResult:
    """Membership test against a fiberization-route range function."""
    entries = fiberization(f, ctx).entries
    residuals = [rf.residual_fiber(x, entries[x]) for x in range(ctx.fiber_count)]
    max_res = max(residuals) if residuals else 0.0
    return MembershipResult(max_res <= rtol * f.norm, max_res)


def is_modulation_invariant(
    spanning_set: Sequence[Signal], lam: Subgroup, rtol: float = RANK_RTOL
) -> bool:
    """Ambient test: every modulate of every spanning vector stays in the span."""
    sigs = [f for f in spanning_set if not f.is_zero()]
    if not sigs:
        return True
    if lam.side != DUAL:
        raise StructureMismatchError("modulation subgroup must live on the dual side")
    group = sigs[0].group
    ambient = np.column_stack([f.values for f in sigs])
    col_norms = np.linalg.norm(ambient, axis=0)
    basis = orthonormal_columns(list(ambient.T), RANK_RTOL * float(col_norms.max()))
    for lam_el in lam.elements:
        chars = character_on_group(group, lam_el)
        modulated = ambient * chars[:, None]
        resid = modulated - basis @ (basis.conj().T @ modulated)
        if np.any(np.linalg.norm(resid, axis=0) > rtol * col_norms):
            return False
    return True


def ambient_projection_matrix(space: ModInvariantSpace) -> np.ndarray:
    """Dense |G| x |G| matrix of the orthogonal projection onto the space.

    Built by transporting the fiberwise projection through the unitary fiber
    map; intended for cross-checks on small groups.
    """
    ctx = space.context
    n = ctx.group.order
    rf = space.range_function
    batch = mod_zak_batch(np.eye(n, dtype=np.complex128), ctx)
    for x in range(ctx.fiber_count):
        b = rf.bases[x]
        batch[:, x, :] = (batch[:, x, :] @ b.conj()) @ b.T
    return inverse_mod_zak_batch(batch, ctx).T
