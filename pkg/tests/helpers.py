"""Shared oracles and builders for the test suite.

The oracles here deliberately re-derive results from definitions (explicit
sums, set closures, dense eigendecompositions) so they stay independent of
the library's vectorized paths.
"""

from __future__ import annotations

import numpy as np

from modspaces.context import ModulationContext
from modspaces.groups import DUAL, GroupSpec, pairing
from modspaces.transforms import Signal


def slow_zak_reference(g: Signal, ctx: ModulationContext) -> np.ndarray:
    """Direct triple-loop evaluation of the zak kernel."""
    out = np.zeros((ctx.fiber_count, ctx.fiber_dim), dtype=np.complex128)
    scale = 1.0 / np.sqrt(ctx.lam.order)
    for xi, x in enumerate(ctx.pi.representatives):
        for di, d in enumerate(ctx.d.representatives):
            total = 0.0 + 0.0j
            for lam in ctx.lam.elements:
                total += g.values[(d + lam).index] * pairing(x, lam)
            out[xi, di] = scale * total
    return out


def slow_dft_reference(f: Signal) -> np.ndarray:
    """Direct double-loop evaluation of the unitary Fourier sum."""
    group = f.group
    out = np.zeros(group.order, dtype=np.complex128)
    for j in range(group.order):
        xi = group.element_at(j, DUAL if f.side == "primal" else "primal")
        total = 0.0 + 0.0j
        for i in range(group.order):
            x = group.element_at(i, f.side)
            total += f.values[i] * np.conj(pairing(x, xi) if f.side == "primal" else pairing(xi, x))
        out[j] = total / np.sqrt(group.order)
    return out


def closure_oracle(group: GroupSpec, gen_residues: list[tuple[int, ...]], side: str) -> set[tuple[int, ...]]:
    """Set-based closure of generators under addition/negation."""
    gens = [group.element(r, side) for r in gen_residues]
    seen = {group.identity(side).residues}
    changed = True
    while changed:
        changed = False
        for res in list(seen):
            el = group.element(res, side)
            for g in gens:
                for cand in (el + g, el - g):
                    if cand.residues not in seen:
                        seen.add(cand.residues)
                        changed = True
    return seen


def signal_from(group: GroupSpec, values, side: str = "primal") -> Signal:
    return Signal(group, side, np.asarray(values, dtype=np.complex128))
