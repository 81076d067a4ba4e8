import numpy as np
import pytest

from modspaces.context import build_context, full_modulation_context
from modspaces.diagnostics import characterization_residual
from modspaces.errors import PreconditionError
from modspaces.frames import modulation_system_matrix
from modspaces.groups import DUAL, GroupSpec, full_subgroup
from modspaces.sampling import random_context, random_signal
from modspaces.spaces import (
    RANK_RTOL,
    ambient_projection_matrix,
    is_modulation_invariant,
    membership,
    mod_invariant_space,
    orthonormal_columns,
    project,
    range_function_from_generators,
    space_from_support,
)
from modspaces.transforms import FiberMatrix, Signal, inverse_mod_zak, mod_zak, modulate

Z4 = GroupSpec((4,))
Z4_CTX = build_context(Z4, [(2,)])
INV_SQRT2 = 1.0 / np.sqrt(2.0)


def _delta(i):
    return Signal.delta(Z4, i)


def test_range_function_single_delta():
    rf = range_function_from_generators([_delta(0)], Z4_CTX)
    assert rf.dims == (1, 0)
    basis = rf.bases[0][:, 0]
    # spans (1,1)/sqrt(2) up to phase
    overlap = abs(np.vdot(basis, np.array([INV_SQRT2, INV_SQRT2])))
    assert abs(overlap - 1.0) < 1e-12


def test_range_function_two_deltas_fills_fiber():
    rf = range_function_from_generators([_delta(0), _delta(2)], Z4_CTX)
    assert rf.dims == (2, 0)


def test_range_function_empty_generators():
    rf = range_function_from_generators([], Z4_CTX)
    assert rf.dims == (0, 0)
    assert rf.total_dim == 0


def test_bases_are_orthonormal():
    rng = np.random.default_rng(21)
    for _ in range(20):
        ctx = random_context(rng, 48)
        gens = [random_signal(rng, ctx.group) for _ in range(int(rng.integers(1, 5)))]
        rf = range_function_from_generators(gens, ctx)
        for basis in rf.bases:
            gram = basis.conj().T @ basis
            assert np.abs(gram - np.eye(basis.shape[1])).max() < 1e-10


def test_gram_schmidt_rank_tolerance():
    v = np.array([1.0, 1.0j])
    near_dup = v + 1e-12 * np.array([1.0, 0.0])
    basis = orthonormal_columns([v, near_dup], tol=1e-9 * np.linalg.norm(v))
    assert basis.shape[1] == 1


def test_membership_worked_examples():
    w0 = mod_invariant_space(Z4_CTX, [_delta(0)])
    for c in (1.0, -3.5, 2j, 0.001 - 7j):
        assert membership(c * _delta(0), w0).member
    res = membership(_delta(2), w0)
    assert not res.member
    assert res.max_residual > 0.5


def test_membership_invariant_under_modulation():
    rng = np.random.default_rng(22)
    for _ in range(15):
        ctx = random_context(rng, 48)
        gens = [random_signal(rng, ctx.group) for _ in range(2)]
        w = mod_invariant_space(ctx, gens)
        f = project(random_signal(rng, ctx.group), w)
        assert membership(f, w).member
        for lam in ctx.lam.elements:
            assert membership(modulate(f, lam), w).member


def test_zero_signal_is_member_of_zero_space():
    zero_space = mod_invariant_space(Z4_CTX, [])
    assert membership(Signal.zeros(Z4), zero_space).member
    assert not membership(_delta(0), zero_space).member


def test_project_worked_examples():
    w0 = mod_invariant_space(Z4_CTX, [_delta(0)])
    inside = 2.0 * _delta(0)
    np.testing.assert_allclose(project(inside, w0).values, inside.values, atol=1e-12)
    # delta_2 has the orthogonal fiber at x = 0
    assert project(_delta(2), w0).norm < 1e-12


def test_project_is_idempotent_selfadjoint_contraction():
    rng = np.random.default_rng(23)
    for _ in range(10):
        ctx = random_context(rng, 32)
        w = mod_invariant_space(ctx, [random_signal(rng, ctx.group) for _ in range(2)])
        f = random_signal(rng, ctx.group)
        once = project(f, w)
        twice = project(once, w)
        assert np.abs(twice.values - once.values).max() < 1e-12
        assert once.norm <= f.norm + 1e-12
        assert membership(once, w).member
        mat = ambient_projection_matrix(w)
        assert np.abs(mat - mat.conj().T).max() < 1e-11
        assert np.abs(mat @ mat - mat).max() < 1e-11


def test_support_space_worked_examples():
    fctx = full_modulation_context(Z4)
    s = space_from_support(fctx, [(0,), (3,)])
    assert membership(_delta(3), s).member
    assert not membership(_delta(1), s).member
    assert s.dims == (1, 0, 0, 1)
    empty = space_from_support(fctx, [])
    assert empty.dimension == 0


def test_support_space_membership_matches_support_condition():
    rng = np.random.default_rng(24)
    for factors in [(6,), (2, 4), (3, 3)]:
        group = GroupSpec(factors)
        fctx = full_modulation_context(group)
        n = group.order
        mask = rng.integers(0, 2, size=n).astype(bool)
        space = space_from_support(fctx, [int(i) for i in np.flatnonzero(mask)])
        vals = np.where(mask, rng.standard_normal(n) + 1j * rng.standard_normal(n), 0.0)
        inside = Signal(group, "primal", vals)
        assert membership(inside, space).member
        outside_points = np.flatnonzero(~mask)
        if outside_points.size and inside.norm > 0:
            bumped = Signal(
                group, "primal", vals + 1e-3 * np.eye(n, dtype=complex)[outside_points[0]]
            )
            assert not membership(bumped, space).member


def test_support_space_requires_full_dual():
    with pytest.raises(PreconditionError):
        space_from_support(Z4_CTX, [(0,)])


def test_is_modulation_invariant_examples():
    full = full_subgroup(Z4, DUAL)
    assert not is_modulation_invariant([_delta(0) + _delta(1)], full)
    orbit = [modulate(_delta(0) + _delta(1), lam) for lam in Z4_CTX.lam.elements]
    assert is_modulation_invariant(orbit, Z4_CTX.lam)
    assert is_modulation_invariant([], Z4_CTX.lam)
    assert is_modulation_invariant([Signal.zeros(Z4)], Z4_CTX.lam)


def test_characterization_matches_ambient_projection():
    rng = np.random.default_rng(25)
    for _ in range(20):
        ctx = random_context(rng, 32)
        gens = [random_signal(rng, ctx.group) for _ in range(int(rng.integers(0, 3)))]
        assert characterization_residual(gens, ctx) < 1e-9


def test_fiberwise_scaling_stays_inside():
    # multiplying each fiber by an arbitrary function of x keeps membership
    rng = np.random.default_rng(26)
    for _ in range(10):
        ctx = random_context(rng, 48)
        w = mod_invariant_space(ctx, [random_signal(rng, ctx.group) for _ in range(2)])
        f = project(random_signal(rng, ctx.group), w)
        scale = rng.standard_normal(ctx.fiber_count) + 1j * rng.standard_normal(ctx.fiber_count)
        fm = mod_zak(f, ctx)
        scaled = inverse_mod_zak(FiberMatrix(ctx, scale[:, None] * fm.entries))
        assert membership(scaled, w).member


def test_equal_range_functions_iff_equal_ambient_projections():
    rng = np.random.default_rng(27)
    for _ in range(10):
        ctx = random_context(rng, 32)
        gens = [random_signal(rng, ctx.group) for _ in range(2)]
        w1 = mod_invariant_space(ctx, gens)
        # same span presented differently: invertible recombination + modulation
        mix = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        mix += 2 * np.eye(2)
        lam = ctx.lam.elements[int(rng.integers(0, ctx.lam.order))]
        regen = [
            modulate(
                Signal(ctx.group, "primal", mix[0, 0] * gens[0].values + mix[0, 1] * gens[1].values),
                lam,
            ),
            Signal(ctx.group, "primal", mix[1, 0] * gens[0].values + mix[1, 1] * gens[1].values),
        ]
        w2 = mod_invariant_space(ctx, regen)
        assert w1.dims == w2.dims
        assert (
            np.abs(ambient_projection_matrix(w1) - ambient_projection_matrix(w2)).max() < 1e-9
        )


def test_total_dimension_equals_ambient_rank():
    rng = np.random.default_rng(28)
    for _ in range(15):
        ctx = random_context(rng, 32)
        gens = [random_signal(rng, ctx.group) for _ in range(int(rng.integers(1, 4)))]
        w = mod_invariant_space(ctx, gens)
        system = modulation_system_matrix(gens, ctx)
        sigma = np.linalg.svd(system, compute_uv=False)
        rank = int(np.sum(sigma > RANK_RTOL * sigma[0]))
        assert w.dimension == rank
