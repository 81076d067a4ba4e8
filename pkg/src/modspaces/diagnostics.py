"""Built-in verification: residual helpers, canned demo scenarios on Z_4,
and the randomized oracle-equivalence selftest suites behind the CLI.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .context import ModulationContext, build_context, combine_indices, full_modulation_context
from .decomposition import principal_decompose, verify_decomposition
from .errors import SizeGuardError
from .frames import (
    MAX_ORACLE_ORDER,
    MEASURE_COUNTING,
    brute_force_frame_bounds,
    fiber_frame_bounds,
    is_riesz_basis,
    modulation_system_matrix,
)
from .groups import GroupSpec, annihilator, coset_decompose
from .metric import cauchy_limit, mod_metric, nested_distance_check
from .sampling import random_context, random_signal, random_space
from .spaces import (
    RANK_RTOL,
    ModInvariantSpace,
    ambient_projection_matrix,
    fiberization_membership,
    fiberization_range_function,
    membership,
    mod_invariant_space,
    project,
    space_from_support,
)
from .transforms import (
    FiberMatrix,
    Signal,
    dft,
    dft_naive,
    inverse_mod_zak,
    mod_zak,
    mod_zak_batch,
    zak_batch,
)

DEMO_TOL = 1e-12


# ---- residual helpers ----


def unitarity_residual(f: Signal, ctx: ModulationContext) -> float:
    """| ||mod_zak f||_F - ||f|| |."""
    return abs(mod_zak(f, ctx).frobenius_norm - f.norm)


def modulation_intertwining_residual(f: Signal, ctx: ModulationContext) -> float:
    """Max deviation of mod_zak(M_l f) from the character-scaled fibers,
    over every subgroup element l and every fiber."""
    base = mod_zak(f, ctx).entries
    modulated = ctx.modulation_table * f.values[None, :]
    batch = mod_zak_batch(modulated, ctx)                       # (|lam|, |Pi|, |D|)
    expected = ctx.char_matrix.T[:, :, None] * base[None, :, :]
    return float(np.abs(batch - expected).max())


def translation_intertwining_residual(g: Signal, ctx: ModulationContext) -> float:
    """Max deviation of zak(T_l g) from the character-scaled fibers, for a
    dual-side signal g and every subgroup element l."""
    base = zak_batch(g.values[None, :], ctx)[0]
    neg_indices = [(-el).index for el in ctx.lam.elements]
    shift_table = combine_indices(ctx.group, neg_indices, np.arange(ctx.group.order))
    translated = g.values[shift_table]                          # (|lam|, |G|)
    batch = zak_batch(translated, ctx)
    expected = ctx.char_matrix.T[:, :, None] * base[None, :, :]
    return float(np.abs(batch - expected).max())


def characterization_residual(generators: Sequence[Signal], ctx: ModulationContext) -> float:
    """Operator-norm gap between the ambient projection onto the modulation
    span and the fiberwise projection transported back to the signal space."""
    if ctx.group.order > MAX_ORACLE_ORDER:
        raise SizeGuardError(
            f"group order {ctx.group.order} exceeds the dense-oracle cap {MAX_ORACLE_ORDER}"
        )
    space = mod_invariant_space(ctx, generators)
    transported = ambient_projection_matrix(space)
    system = modulation_system_matrix(list(generators), ctx)
    if system.shape[1] == 0:
        ambient = np.zeros_like(transported)
    else:
        u, s, _ = np.linalg.svd(system, full_matrices=False)
        basis = u[:, s > RANK_RTOL * s[0]] if s.size else u[:, :0]
        ambient = basis @ basis.conj().T
    diff = ambient - transported
    return float(np.linalg.svd(diff, compute_uv=False)[0]) if diff.size else 0.0


# ---- demo ----


def _scenario(name: str, ok: bool, **payload) -> dict:
    out = {"name": name, "ok": bool(ok)}
    out.update(payload)
    return out


def run_demo() -> dict:
    """Fixed Z_4 scenarios with their expected values pinned to 1e-12."""
    group = GroupSpec((4,))
    ctx = build_context(group, [(2,)])
    d0 = Signal.delta(group, 0)
    d1 = Signal.delta(group, 1)
    d2 = Signal.delta(group, 2)
    scenarios = []

    ann = annihilator(ctx.lam)
    reps = [r.residues[0] for r in ctx.pi.representatives]
    rep3, h3 = coset_decompose(group.element((3,)), ctx.pi)
    scenarios.append(
        _scenario(
            "group_structure",
            ok=(
                [e.residues[0] for e in ann.elements] == [0, 2]
                and reps == [0, 1]
                and (rep3.residues[0], h3.residues[0]) == (1, 2)
            ),
            annihilator=[list(e.residues) for e in ann.elements],
            pi_representatives=[list(r.residues) for r in ctx.pi.representatives],
        )
    )

    got_d0 = dft(d0).values
    got_d1 = dft(d1).values
    want_d0 = np.full(4, 0.5, dtype=complex)
    want_d1 = 0.5 * np.array([1, -1j, -1, 1j])
    dft_resid = max(np.abs(got_d0 - want_d0).max(), np.abs(got_d1 - want_d1).max())
    naive_resid = float(np.abs(dft_naive(d1).values - got_d1).max())
    scenarios.append(
        _scenario(
            "dft_worked_values",
            ok=dft_resid < DEMO_TOL and naive_resid < DEMO_TOL,
            residual=float(dft_resid),
            naive_vs_fft_residual=naive_resid,
        )
    )

    s = 1.0 / np.sqrt(2.0)
    want_z0 = np.array([[s, s], [0, 0]], dtype=complex)
    want_z1 = np.array([[0, 0], [s, -1j * s]], dtype=complex)
    z0 = mod_zak(d0, ctx).entries
    z1 = mod_zak(d1, ctx).entries
    zak_resid = max(np.abs(z0 - want_z0).max(), np.abs(z1 - want_z1).max())
    round_trip = float(
        np.abs(inverse_mod_zak(FiberMatrix(ctx, z1)).values - d1.values).max()
    )
    scenarios.append(
        _scenario(
            "mod_zak_worked_values",
            ok=zak_resid < DEMO_TOL and round_trip < DEMO_TOL,
            residual=float(zak_resid),
            round_trip_residual=round_trip,
        )
    )

    w0 = mod_invariant_space(ctx, [d0])
    member_scaled = membership(2.5j * d0, w0)
    member_d2 = membership(d2, w0)
    scenarios.append(
        _scenario(
            "membership",
            ok=member_scaled.member and not member_d2.member,
            scaled_generator_member=member_scaled.member,
            orthogonal_delta_member=member_d2.member,
        )
    )

    fr = fiber_frame_bounds([d0], ctx)
    scenarios.append(
        _scenario(
            "frame_bounds_single_delta",
            ok=abs(fr.lower - 1.0) < DEMO_TOL and abs(fr.upper - 1.0) < DEMO_TOL and fr.is_parseval,
            A=fr.lower,
            B=fr.upper,
            parseval=fr.is_parseval,
        )
    )

    w02 = mod_invariant_space(ctx, [d0, d2])
    dec = principal_decompose(w02)
    rep = verify_decomposition(w02, dec)
    scenarios.append(
        _scenario(
            "principal_decomposition",
            ok=len(dec) == 2 and rep.max_residual < 1e-10 and rep.dimension_ok,
            generator_count=len(dec),
            max_residual=rep.max_residual,
        )
    )

    w1 = mod_invariant_space(ctx, [d1])
    theta_01 = mod_metric(w0, w1).theta
    theta_scaled = mod_metric(w0, mod_invariant_space(ctx, [3.0 * d0])).theta
    nested = nested_distance_check(w0, w02)
    scenarios.append(
        _scenario(
            "modulation_metric",
            ok=abs(theta_01 - 1.0) < 1e-10 and theta_scaled == 0.0 and abs(nested - 1.0) < 1e-10,
            theta_delta0_delta1=theta_01,
            theta_scaled=theta_scaled,
            theta_nested_chain=nested,
        )
    )

    fctx = full_modulation_context(group)
    supp = space_from_support(fctx, [(0,), (3,)])
    in3 = membership(Signal.delta(group, 3), supp).member
    in1 = membership(Signal.delta(group, 1), supp).member
    scenarios.append(
        _scenario(
            "support_space",
            ok=in3 and not in1,
            delta3_member=in3,
            delta1_member=in1,
        )
    )

    all_ok = all(s["ok"] for s in scenarios)
    return {"command": "demo", "scenarios": scenarios, "all_ok": all_ok}


# ---- selftest ----


def project_member(rng: np.random.Generator, space: ModInvariantSpace) -> Signal:
    """A pseudo-random element of the space (projection of noise)."""
    noise = random_signal(rng, space.context.group)
    return project(noise, space)


def _suite(name: str, instances: int, max_residual: float, tolerance: float, ok: bool, **extra) -> dict:
    out = {
        "name": name,
        "instances": instances,
        "max_residual": float(max_residual),
        "tolerance": tolerance,
        "ok": bool(ok),
    }
    out.update(extra)
    return out


def run_selftest(seed: int = 20240501, scale: int = 1) -> dict:
    """Randomized oracle-equivalence suites; ``scale`` multiplies instance counts."""
    rng = np.random.default_rng(seed)
    suites = []

    n = 40 * scale
    resid = 0.0
    for _ in range(n):
        ctx = random_context(rng, 128)
        f = random_signal(rng, ctx.group)
        resid = max(resid, unitarity_residual(f, ctx))
        resid = max(resid, modulation_intertwining_residual(f, ctx))
        g = random_signal(rng, ctx.group, side="dual")
        resid = max(resid, translation_intertwining_residual(g, ctx))
    suites.append(_suite("transform_unitarity_intertwining", n, resid, 1e-12, resid < 1e-12))

    n = 15 * scale
    resid = 0.0
    for _ in range(n):
        ctx = random_context(rng, 32)
        gens = [random_signal(rng, ctx.group) for _ in range(int(rng.integers(1, 3)))]
        resid = max(resid, characterization_residual(gens, ctx))
    suites.append(_suite("characterization_equivalence", n, resid, 1e-9, resid < 1e-9))

    n = 20 * scale
    resid = 0.0
    flags_ok = True
    for _ in range(n):
        ctx = random_context(rng, 48)
        gens = [random_signal(rng, ctx.group) for _ in range(int(rng.integers(1, 4)))]
        fiber = fiber_frame_bounds(gens, ctx)
        brute = brute_force_frame_bounds(gens, ctx)
        resid = max(
            resid,
            abs(fiber.lower - brute.lower) / max(brute.lower, 1e-300),
            abs(fiber.upper - brute.upper) / max(brute.upper, 1e-300),
        )
        counting = brute_force_frame_bounds(gens, ctx, measure=MEASURE_COUNTING)
        resid = max(
            resid,
            abs(counting.lower - ctx.lam.order * fiber.lower) / max(counting.lower, 1e-300),
            abs(counting.upper - ctx.lam.order * fiber.upper) / max(counting.upper, 1e-300),
        )
        flags_ok = flags_ok and fiber.is_riesz == brute.is_riesz == bool(is_riesz_basis(gens, ctx))
        flags_ok = flags_ok and fiber.is_parseval == brute.is_parseval
    suites.append(
        _suite("frame_oracle_agreement", n, resid, 1e-8, resid < 1e-8 and flags_ok, flags_equal=flags_ok)
    )

    n = 15 * scale
    mismatches = 0
    dims_equal = True
    for _ in range(n):
        ctx = random_context(rng, 48)
        gens = [random_signal(rng, ctx.group) for _ in range(int(rng.integers(1, 3)))]
        space = mod_invariant_space(ctx, gens)
        rf_fib = fiberization_range_function(gens, ctx)
        dims_equal = dims_equal and rf_fib.dims == space.dims
        probes = [random_signal(rng, ctx.group) for _ in range(3)]
        probes += [space.generators[0], project_member(rng, space)]
        for f in probes:
            if membership(f, space).member != fiberization_membership(f, rf_fib, ctx).member:
                mismatches += 1
    suites.append(
        _suite(
            "fiberization_consistency",
            n,
            float(mismatches),
            0.0,
            mismatches == 0 and dims_equal,
            dims_equal=dims_equal,
        )
    )

    n = 10 * scale
    resid = 0.0
    dims_ok = True
    for _ in range(n):
        ctx = random_context(rng, 32)
        space = random_space(rng, ctx)
        dec = principal_decompose(space)
        report = verify_decomposition(space, dec)
        resid = max(resid, report.max_residual)
        dims_ok = dims_ok and report.dimension_ok
    suites.append(_suite("decomposition_invariants", n, resid, 1e-8, resid < 1e-8 and dims_ok))

    n = 30 * scale
    slack = 0.0
    axioms_ok = True
    for _ in range(n):
        ctx = random_context(rng, 32)
        u, v, w = (random_space(rng, ctx) for _ in range(3))
        tuv, tvw, tuw = mod_metric(u, v).theta, mod_metric(v, w).theta, mod_metric(u, w).theta
        slack = max(slack, tuw - (tuv + tvw))
        axioms_ok = axioms_ok and mod_metric(v, u).theta == tuv
        axioms_ok = axioms_ok and 0.0 <= tuv <= 1.0 and mod_metric(u, u).theta == 0.0
    suites.append(
        _suite("metric_axioms", n, max(slack, 0.0), 1e-12, slack <= 1e-12 and axioms_ok)
    )

    all_ok = all(s["ok"] for s in suites)
    return {"command": "selftest", "seed": seed, "suites": suites, "all_ok": all_ok}
