"""Seeded random problem instances for self-tests and property tests."""

from __future__ import annotations

import numpy as np

from .context import ModulationContext, build_context
from .groups import DUAL, GroupSpec, Subgroup, subgroup_from_generators
from .spaces import ModInvariantSpace, mod_invariant_space
from .transforms import Signal


def random_group_spec(rng: np.random.Generator, max_order: int, max_factors: int = 3) -> GroupSpec:
    """Random product of cyclic factors with order <= max_order."""
    k = int(rng.integers(1, max_factors + 1))
    factors = []
    budget = max_order
    for i in range(k):
        remaining = k - i - 1
        cap = budget // (2 ** remaining)
        if cap < 2:
            break
        n = int(rng.integers(2, cap + 1))
        factors.append(n)
        budget //= n
    if not factors:
        factors = [int(rng.integers(2, max_order + 1))]
    return GroupSpec(tuple(factors))


def random_subgroup(rng: np.random.Generator, group: GroupSpec, side: str = DUAL) -> Subgroup:
    """Subgroup closed from 0-2 random generators (possibly trivial)."""
    n_gens = int(rng.integers(0, 3))
    gens = [
        group.element(tuple(int(rng.integers(0, n)) for n in group.factors), side)
        for _ in range(n_gens)
    ]
    return subgroup_from_generators(group, gens, side=side)


def random_context(rng: np.random.Generator, max_order: int) -> ModulationContext:
    group = random_group_spec(rng, max_order)
    return ModulationContext(group, random_subgroup(rng, group))


def random_signal(rng: np.random.Generator, group: GroupSpec, side: str = "primal") -> Signal:
    values = rng.standard_normal(group.order) + 1j * rng.standard_normal(group.order)
    return Signal(group, side, values)


def random_space(
    rng: np.random.Generator, ctx: ModulationContext, max_generators: int = 3
) -> ModInvariantSpace:
    m = int(rng.integers(0, max_generators + 1))
    gens = [random_signal(rng, ctx.group) for _ in range(m)]
    return mod_invariant_space(ctx, gens)
