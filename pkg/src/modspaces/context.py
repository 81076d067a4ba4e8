"""Modulation context: a group G, a dual subgroup, its annihilator, and the
two deterministic quotient sections, plus cached index/character tables that
the transforms and analyses share.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import StructureMismatchError
from .groups import (
    DUAL,
    GroupSpec,
    GroupElement,
    Section,
    Subgroup,
    annihilator,
    full_subgroup,
    section,
    subgroup_from_generators,
)


def character_table(group: GroupSpec, row_indices: Sequence[int], col_indices: Sequence[int]) -> np.ndarray:
    """Matrix of pairings <row, col> with exact integer phase arithmetic."""
    lcm = group.exponent_lcm
    weights = np.array([lcm // n for n in group.factors], dtype=np.int64)
    rows = group.residue_table[np.asarray(row_indices, dtype=np.intp)].astype(np.int64)
    cols = group.residue_table[np.asarray(col_indices, dtype=np.intp)].astype(np.int64)
    phase = (rows * weights) @ cols.T % lcm
    return np.exp(2j * np.pi * (phase / lcm))


def combine_indices(group: GroupSpec, left_indices: Sequence[int], right_indices: Sequence[int]) -> np.ndarray:
    """(len(left), len(right)) table of element indices of left[i] + right[j]."""
    strides = np.array(group.strides, dtype=np.int64)
    factors = np.array(group.factors, dtype=np.int64)
    left = group.residue_table[np.asarray(left_indices, dtype=np.intp)].astype(np.int64)
    right = group.residue_table[np.asarray(right_indices, dtype=np.intp)].astype(np.int64)
    summed = (left[:, None, :] + right[None, :, :]) % factors
    return (summed * strides).sum(axis=2)


@dataclass(frozen=True, eq=False)
class ModulationContext:
    """Bundles (G, dual subgroup, annihilator, both sections) for one problem.

    Everything is derived deterministically from the group and the dual
    subgroup: the annihilator by the exact pairing test and both sections by
    the index-minimal representative rule.
    """

    group: GroupSpec
    lam: Subgroup

    def __post_init__(self) -> None:
        if self.lam.parent.factors != self.group.factors:
            raise StructureMismatchError(
                f"subgroup parent {self.lam.parent.factors} != group {self.group.factors}"
            )
        if self.lam.side != DUAL:
            raise StructureMismatchError("modulation subgroup must live on the dual side")

    @cached_property
    def lam_star(self) -> Subgroup:
        return annihilator(self.lam)

    @cached_property
    def pi(self) -> Section:
        """Section of G / annihilator; fibers are indexed by its representatives."""
        return section(self.group, self.lam_star)

    @cached_property
    def d(self) -> Section:
        """Section of the dual group modulo the modulation subgroup."""
        return section(self.group, self.lam)

    @property
    def fiber_count(self) -> int:
        return len(self.pi)

    @property
    def fiber_dim(self) -> int:
        return len(self.d)

    def key(self) -> tuple:
        return (self.group.factors, self.lam.key())

    def same_context(self, other: "ModulationContext") -> bool:
        return self.key() == other.key()

    def require_same(self, other: "ModulationContext") -> None:
        if not self.same_context(other):
            raise StructureMismatchError("operands were built over different contexts")

    # ---- cached numeric tables ----

    @cached_property
    def pi_rep_indices(self) -> np.ndarray:
        return np.array([r.index for r in self.pi.representatives], dtype=np.intp)

    @cached_property
    def d_rep_indices(self) -> np.ndarray:
        return np.array([r.index for r in self.d.representatives], dtype=np.intp)

    @cached_property
    def lam_indices(self) -> np.ndarray:
        return np.array([el.index for el in self.lam.elements], dtype=np.intp)

    @cached_property
    def lam_star_indices(self) -> np.ndarray:
        return np.array([el.index for el in self.lam_star.elements], dtype=np.intp)

    @cached_property
    def char_matrix(self) -> np.ndarray:
        """(|Pi|, |lam|) table of <pi_rep, lam_element> pairings."""
        return character_table(self.group, self.pi_rep_indices, self.lam_indices)

    @cached_property
    def zak_gather_indices(self) -> np.ndarray:
        """(|D|, |lam|) dual-element indices of d_rep + lam_element."""
        return combine_indices(self.group, self.d_rep_indices, self.lam_indices)

    @cached_property
    def fiberization_gather_indices(self) -> np.ndarray:
        """(|Pi|, |lam_star|) primal-element indices of pi_rep + annihilator element."""
        return combine_indices(self.group, self.pi_rep_indices, self.lam_star_indices)

    @cached_property
    def modulation_table(self) -> np.ndarray:
        """(|lam|, |G|) character values <x, lam_element> over the whole group."""
        all_indices = np.arange(self.group.order, dtype=np.intp)
        return character_table(self.group, self.lam_indices, all_indices)


def build_context(
    group: GroupSpec,
    lam_generators: Iterable[GroupElement | Sequence[int]] = (),
) -> ModulationContext:
    """Context from dual-subgroup generators given as elements or residue tuples."""
    gens = []
    for g in lam_generators:
        if isinstance(g, GroupElement):
            if g.side != DUAL:
                raise StructureMismatchError("modulation generators must be dual-side elements")
            gens.append(g)
        else:
            gens.append(group.element(tuple(g), DUAL))
    lam = subgroup_from_generators(group, gens, side=DUAL)
    return ModulationContext(group, lam)


def full_modulation_context(group: GroupSpec) -> ModulationContext:
    """Context with the full dual group as modulation subgroup."""
    return ModulationContext(group, full_subgroup(group, DUAL))
