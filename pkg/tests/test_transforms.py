import numpy as np
import pytest

from modspaces.context import build_context
from modspaces.errors import PreconditionError, StructureMismatchError
from modspaces.groups import DUAL, PRIMAL, GroupSpec
from modspaces.sampling import random_context, random_signal
from modspaces.spaces import range_function_from_fiber_stack
from modspaces.transforms import (
    FiberMatrix,
    Signal,
    dft,
    dft_naive,
    fiberization,
    fiberization_stack,
    inverse_dft,
    inverse_mod_zak,
    mod_zak,
    mod_zak_stack,
    modulate,
    translate,
    zak,
)
from modspaces.diagnostics import (
    modulation_intertwining_residual,
    translation_intertwining_residual,
    unitarity_residual,
)

from helpers import slow_dft_reference, slow_zak_reference

Z4 = GroupSpec((4,))
Z4_CTX = build_context(Z4, [(2,)])
INV_SQRT2 = 1.0 / np.sqrt(2.0)


def test_dft_worked_values():
    d0 = Signal.delta(Z4, 0)
    np.testing.assert_allclose(dft(d0).values, np.full(4, 0.5), atol=1e-14)
    const = Signal(Z4, PRIMAL, np.full(4, 0.5))
    np.testing.assert_allclose(dft(const).values, Signal.delta(Z4, 0, DUAL).values, atol=1e-14)
    d1 = Signal.delta(Z4, 1)
    np.testing.assert_allclose(
        dft(d1).values, 0.5 * np.array([1, -1j, -1, 1j]), atol=1e-14
    )


def test_dft_side_flips_and_inverts():
    rng = np.random.default_rng(0)
    f = random_signal(rng, GroupSpec((3, 4)))
    g = dft(f)
    assert g.side == DUAL
    back = inverse_dft(g)
    assert back.side == PRIMAL
    np.testing.assert_allclose(back.values, f.values, atol=1e-12)


def test_dft_matches_naive_and_slow_reference():
    rng = np.random.default_rng(1)
    for factors in [(5,), (2, 3), (4, 2), (7,), (2, 2, 2)]:
        f = random_signal(rng, GroupSpec(factors))
        fast = dft(f).values
        np.testing.assert_allclose(fast, dft_naive(f).values, atol=1e-12)
        np.testing.assert_allclose(fast, slow_dft_reference(f), atol=1e-12)


def test_dft_unitary_on_random_groups():
    rng = np.random.default_rng(2)
    for _ in range(50):
        ctx = random_context(rng, 200)
        f = random_signal(rng, ctx.group)
        assert abs(dft(f).norm - f.norm) < 1e-12


def test_zak_worked_values():
    g = Signal(Z4, DUAL, np.full(4, 0.5))
    entries = zak(g, Z4_CTX).entries
    np.testing.assert_allclose(
        entries, np.array([[INV_SQRT2, INV_SQRT2], [0, 0]]), atol=1e-14
    )
    zero = zak(Signal.zeros(Z4, DUAL), Z4_CTX).entries
    assert np.all(zero == 0)


def test_zak_matches_slow_reference_and_is_isometric():
    rng = np.random.default_rng(3)
    for _ in range(25):
        ctx = random_context(rng, 36)
        g = random_signal(rng, ctx.group, side=DUAL)
        fm = zak(g, ctx)
        np.testing.assert_allclose(fm.entries, slow_zak_reference(g, ctx), atol=1e-12)
        assert abs(fm.frobenius_norm - g.norm) < 1e-12


def test_mod_zak_worked_values():
    z0 = mod_zak(Signal.delta(Z4, 0), Z4_CTX).entries
    np.testing.assert_allclose(
        z0, np.array([[INV_SQRT2, INV_SQRT2], [0, 0]]), atol=1e-14
    )
    z1 = mod_zak(Signal.delta(Z4, 1), Z4_CTX).entries
    np.testing.assert_allclose(
        z1, np.array([[0, 0], [INV_SQRT2, -1j * INV_SQRT2]]), atol=1e-14
    )


def test_mod_zak_modulation_becomes_row_scaling():
    d0 = Signal.delta(Z4, 0)
    lam2 = Z4.element((2,), DUAL)
    base = mod_zak(d0, Z4_CTX).entries
    scaled = mod_zak(modulate(d0, lam2), Z4_CTX).entries
    row_chars = np.array([1.0, -1.0])  # <x, 2> on representatives 0, 1
    np.testing.assert_allclose(scaled, row_chars[:, None] * base, atol=1e-14)


def test_intertwining_residuals_random():
    rng = np.random.default_rng(4)
    for _ in range(25):
        ctx = random_context(rng, 64)
        f = random_signal(rng, ctx.group)
        assert unitarity_residual(f, ctx) < 1e-12
        assert modulation_intertwining_residual(f, ctx) < 1e-12
        g = random_signal(rng, ctx.group, side=DUAL)
        assert translation_intertwining_residual(g, ctx) < 1e-12


def test_translate_definition():
    g = Signal(Z4, DUAL, np.array([1.0, 2.0, 3.0, 4.0], dtype=complex))
    shifted = translate(g, Z4.element((1,), DUAL))
    np.testing.assert_allclose(shifted.values, [4.0, 1.0, 2.0, 3.0])


def test_inverse_mod_zak_round_trips():
    rng = np.random.default_rng(5)
    for _ in range(25):
        ctx = random_context(rng, 64)
        f = random_signal(rng, ctx.group)
        fm = mod_zak(f, ctx)
        back = inverse_mod_zak(fm)
        assert np.abs(back.values - f.values).max() < 1e-12
        # other direction: arbitrary fiber matrix
        mat = rng.standard_normal(fm.entries.shape) + 1j * rng.standard_normal(fm.entries.shape)
        fm2 = FiberMatrix(ctx, mat)
        again = mod_zak(inverse_mod_zak(fm2), ctx)
        assert np.abs(again.entries - mat).max() < 1e-12


def test_inverse_mod_zak_zero_and_shape_mismatch():
    zero = FiberMatrix(Z4_CTX, np.zeros((2, 2)))
    assert inverse_mod_zak(zero).is_zero()
    with pytest.raises(StructureMismatchError):
        FiberMatrix(Z4_CTX, np.zeros((3, 2)))


def test_transforms_are_linear():
    rng = np.random.default_rng(6)
    ctx = random_context(rng, 48)
    f1, f2 = random_signal(rng, ctx.group), random_signal(rng, ctx.group)
    a, b = 1.3 - 0.2j, -0.7 + 2.1j
    combo = a * f1 + b * f2
    np.testing.assert_allclose(
        mod_zak(combo, ctx).entries,
        a * mod_zak(f1, ctx).entries + b * mod_zak(f2, ctx).entries,
        atol=1e-12,
    )
    np.testing.assert_allclose(
        dft(combo).values, a * dft(f1).values + b * dft(f2).values, atol=1e-12
    )


def test_fiberization_worked_values():
    entries = fiberization(Signal.delta(Z4, 0), Z4_CTX).entries
    want = np.zeros((2, 2))
    want[0, 0] = 1.0  # the double transform reflects: only x + k = 0 survives
    np.testing.assert_allclose(entries, want, atol=1e-14)
    assert np.all(fiberization(Signal.zeros(Z4), Z4_CTX).entries == 0)


def test_fiberization_is_reflected_restriction():
    rng = np.random.default_rng(7)
    for _ in range(20):
        ctx = random_context(rng, 48)
        f = random_signal(rng, ctx.group)
        entries = fiberization(f, ctx).entries
        for xi, x in enumerate(ctx.pi.representatives):
            for ki, k in enumerate(ctx.lam_star.elements):
                assert abs(entries[xi, ki] - f.values[(-(x + k)).index]) < 1e-12


def test_fiberization_preserves_norm():
    rng = np.random.default_rng(8)
    for _ in range(20):
        ctx = random_context(rng, 64)
        f = random_signal(rng, ctx.group)
        assert abs(np.linalg.norm(fiberization(f, ctx).entries) - f.norm) < 1e-12


def test_fiberization_fiber_ranks_match_mod_zak():
    rng = np.random.default_rng(9)
    for _ in range(20):
        ctx = random_context(rng, 48)
        gens = [random_signal(rng, ctx.group) for _ in range(int(rng.integers(1, 4)))]
        rf_z = range_function_from_fiber_stack(ctx.pi, mod_zak_stack(gens, ctx))
        rf_t = range_function_from_fiber_stack(ctx.pi, fiberization_stack(gens, ctx))
        assert rf_z.dims == rf_t.dims


def test_side_preconditions():
    dual_sig = Signal.zeros(Z4, DUAL)
    with pytest.raises(PreconditionError):
        mod_zak(dual_sig, Z4_CTX)
    with pytest.raises(PreconditionError):
        fiberization(dual_sig, Z4_CTX)
    with pytest.raises(PreconditionError):
        zak(Signal.zeros(Z4, PRIMAL), Z4_CTX)
    with pytest.raises(StructureMismatchError):
        mod_zak(Signal.zeros(GroupSpec((5,)), PRIMAL), Z4_CTX)
