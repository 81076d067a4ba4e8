"""Finite abelian groups as products of cyclic factors, with duals, subgroups,
annihilators, and deterministic quotient sections.

A group Z_{n_1} x ... x Z_{n_k} and its dual share one ``GroupSpec``; elements
carry a ``side`` tag ("primal" for G, "dual" for the character group) so that
category errors are caught early.  Element indexing is mixed-radix
lexicographic: ``index = x_1*(n_2*...*n_k) + ... + x_k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import PreconditionError, StructureMismatchError

PRIMAL = "primal"
DUAL = "dual"
_SIDES = (PRIMAL, DUAL)


def opposite_side(side: str) -> str:
    return DUAL if side == PRIMAL else PRIMAL


def _check_side(side: str) -> str:
    if side not in _SIDES:
        raise StructureMismatchError(f"side must be 'primal' or 'dual', got {side!r}")
    return side


@dataclass(frozen=True)
class GroupSpec:
    """A finite abelian group given as an explicit product of cyclic factors.

    Factors are taken as-is (no canonicalization) so that element indexing
    stays bit-exact and transparent in I/O.
    """

    factors: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.factors:
            raise StructureMismatchError("factor list must be non-empty")
        factors = tuple(int(n) for n in self.factors)
        for n in factors:
            if n < 2:
                raise StructureMismatchError(f"cyclic factor {n} < 2")
        object.__setattr__(self, "factors", factors)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @cached_property
    def strides(self) -> tuple[int, ...]:
        strides = []
        acc = 1
        for n in reversed(self.factors):
            strides.append(acc)
            acc *= n
        return tuple(reversed(strides))

    @cached_property
    def exponent_lcm(self) -> int:
        return math.lcm(*self.factors)

    @cached_property
    def residue_table(self) -> np.ndarray:
        """(order, k) int array: row i holds the residue tuple of index i."""
        table = np.indices(self.factors).reshape(len(self.factors), -1).T
        table = np.ascontiguousarray(table)
        table.setflags(write=False)
        return table

    def index_of(self, residues: Sequence[int]) -> int:
        return sum(int(r) % n * s for r, n, s in zip(residues, self.factors, self.strides))

    def residues_of(self, index: int) -> tuple[int, ...]:
        index = int(index)
        if not 0 <= index < self.order:
            raise PreconditionError(f"element index {index} out of range [0, {self.order})")
        out = []
        for s, n in zip(self.strides, self.factors):
            out.append((index // s) % n)
        return tuple(out)

    def element(self, residues: Sequence[int], side: str = PRIMAL) -> "GroupElement":
        return GroupElement(self, tuple(residues), side)

    def element_at(self, index: int, side: str = PRIMAL) -> "GroupElement":
        return GroupElement(self, self.residues_of(index), side)

    def identity(self, side: str = PRIMAL) -> "GroupElement":
        return GroupElement(self, (0,) * len(self.factors), side)

    def elements(self, side: str = PRIMAL) -> Iterator["GroupElement"]:
        for idx in range(self.order):
            yield self.element_at(idx, side)


@dataclass(frozen=True)
class GroupElement:
    """Residue tuple in a GroupSpec, tagged with the primal or dual side."""

    group: GroupSpec
    residues: tuple[int, ...]
    side: str = PRIMAL

    def __post_init__(self) -> None:
        _check_side(self.side)
        if len(self.residues) != len(self.group.factors):
            raise StructureMismatchError(
                f"residue tuple length {len(self.residues)} != number of factors "
                f"{len(self.group.factors)}"
            )
        reduced = tuple(int(r) % n for r, n in zip(self.residues, self.group.factors))
        object.__setattr__(self, "residues", reduced)

    @property
    def index(self) -> int:
        return self.group.index_of(self.residues)

    def _require_like(self, other: "GroupElement") -> None:
        if self.group.factors != other.group.factors or self.side != other.side:
            raise StructureMismatchError(
                "elements belong to different groups or sides: "
                f"{self.group.factors}/{self.side} vs {other.group.factors}/{other.side}"
            )

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._require_like(other)
        return GroupElement(
            self.group,
            tuple(a + b for a, b in zip(self.residues, other.residues)),
            self.side,
        )

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, tuple(-r for r in self.residues), self.side)

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def is_identity(self) -> bool:
        return all(r == 0 for r in self.residues)


def pairing_phase_numerator(x: GroupElement, xi: GroupElement) -> int:
    """Exact phase t with <x, xi> = exp(2*pi*i*t/L), L the lcm of the factors.

    Integer arithmetic throughout, so annihilator tests are exact.
    """
    if x.group.factors != xi.group.factors:
        raise StructureMismatchError(
            f"pairing needs identical factor lists, got {x.group.factors} and "
            f"{xi.group.factors}"
        )
    if x.side == xi.side:
        raise StructureMismatchError(
            f"pairing needs one primal and one dual element, got two {x.side!r}"
        )
    lcm = x.group.exponent_lcm
    t = sum(a * b * (lcm // n) for a, b, n in zip(x.residues, xi.residues, x.group.factors))
    return t % lcm


def pairing(x: GroupElement, xi: GroupElement) -> complex:
    """Character pairing <x, xi> = exp(2*pi*i * sum_j x_j*xi_j / n_j)."""
    t = pairing_phase_numerator(x, xi)
    return complex(np.exp(2j * np.pi * (t / x.group.exponent_lcm)))


@dataclass(frozen=True)
class Subgroup:
    """Enumerated subgroup: generators plus the full closure, sorted by index."""

    parent: GroupSpec
    side: str
    generators: tuple[GroupElement, ...]
    elements: tuple[GroupElement, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def index_set(self) -> frozenset[int]:
        return frozenset(el.index for el in self.elements)

    @cached_property
    def position_of_index(self) -> dict[int, int]:
        return {el.index: pos for pos, el in enumerate(self.elements)}

    def contains(self, g: GroupElement) -> bool:
        return g.index in self.index_set

    def key(self) -> tuple:
        return (self.parent.factors, self.side, tuple(el.index for el in self.elements))


def subgroup_from_generators(
    group: GroupSpec,
    generators: Iterable[GroupElement],
    side: str | None = None,
) -> Subgroup:
    """Close a generator list under addition and negation.

    ``side`` is only needed when the generator list is empty (then the trivial
    subgroup on that side is returned).
    """
    gens = tuple(generators)
    if gens:
        inferred = gens[0].side
        for g in gens:
            if g.group.factors != group.factors:
                raise StructureMismatchError(
                    f"generator group {g.group.factors} != parent {group.factors}"
                )
            if g.side != inferred:
                raise StructureMismatchError("generators mix primal and dual sides")
        if side is not None and side != inferred:
            raise StructureMismatchError(
                f"requested side {side!r} but generators live on {inferred!r}"
            )
        side = inferred
    elif side is None:
        raise PreconditionError("empty generator list needs an explicit side")
    _check_side(side)

    identity = group.identity(side)
    seen = {identity.index: identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for el in frontier:
            for g in gens:
                for cand in (el + g, el - g):
                    if cand.index not in seen:
                        seen[cand.index] = cand
                        nxt.append(cand)
        frontier = nxt
    elements = tuple(seen[idx] for idx in sorted(seen))
    return Subgroup(group, side, gens, elements)


def trivial_subgroup(group: GroupSpec, side: str) -> Subgroup:
    return subgroup_from_generators(group, (), side=side)


def full_subgroup(group: GroupSpec, side: str) -> Subgroup:
    gens = tuple(
        group.element(tuple(1 if j == i else 0 for j in range(len(group.factors))), side)
        for i in range(len(group.factors))
    )
    return subgroup_from_generators(group, gens)


def annihilator(subgroup: Subgroup) -> Subgroup:
    """All opposite-side elements pairing to 1 with every subgroup element.

    Exact integer phase test; the result has order |G| / |subgroup|.
    """
    group = subgroup.parent
    out_side = opposite_side(subgroup.side)
    lcm = group.exponent_lcm
    weights = np.array([lcm // n for n in group.factors], dtype=np.int64)
    sub_res = np.array(
        [el.residues for el in subgroup.elements], dtype=np.int64
    ).reshape(subgroup.order, len(group.factors))
    phases = (group.residue_table.astype(np.int64) * weights) @ sub_res.T % lcm
    kept_idx = np.flatnonzero(~phases.any(axis=1))
    kept = tuple(group.element_at(int(i), out_side) for i in kept_idx)
    return Subgroup(group, out_side, kept, kept)


@dataclass(frozen=True)
class Section:
    """Transversal of parent/subgroup: the index-minimal member of each coset.

    ``coset_index`` maps every parent element index to the position of its
    coset representative in ``representatives``.
    """

    parent: GroupSpec
    subgroup: Subgroup
    representatives: tuple[GroupElement, ...]
    coset_index: tuple[int, ...]

    @property
    def side(self) -> str:
        return self.subgroup.side

    def __len__(self) -> int:
        return len(self.representatives)

    def key(self) -> tuple:
        return (self.parent.factors, self.side, tuple(r.index for r in self.representatives))


def section(group: GroupSpec, subgroup: Subgroup) -> Section:
    """Deterministic section: scan indices in order, keep first of each coset."""
    if subgroup.parent.factors != group.factors:
        raise StructureMismatchError(
            f"subgroup parent {subgroup.parent.factors} != group {group.factors}"
        )
    coset_index = [-1] * group.order
    representatives: list[GroupElement] = []
    for idx in range(group.order):
        if coset_index[idx] >= 0:
            continue
        rep = group.element_at(idx, subgroup.side)
        pos = len(representatives)
        representatives.append(rep)
        for h in subgroup.elements:
            coset_index[(rep + h).index] = pos
    return Section(group, subgroup, tuple(representatives), tuple(coset_index))


def coset_decompose(g: GroupElement, sec: Section) -> tuple[GroupElement, GroupElement]:
    """Unique split g = rep + h with rep a section representative, h in the subgroup."""
    if g.group.factors != sec.parent.factors or g.side != sec.side:
        raise StructureMismatchError("element does not live in the section's group")
    rep = sec.representatives[sec.coset_index[g.index]]
    return rep, g - rep
