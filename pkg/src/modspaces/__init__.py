"""Modulation-invariant subspaces on finite abelian groups.

Zak-type transforms, range functions, fiberwise frame bounds, principal
decompositions, and the modulation metric, each paired with brute-force
ambient oracles at small scale.
"""

from .context import ModulationContext, build_context, full_modulation_context
from .decomposition import (
    DecompositionReport,
    PrincipalDecomposition,
    principal_decompose,
    verify_decomposition,
)
from .errors import (
    GuardError,
    NotCauchyError,
    PreconditionError,
    SizeGuardError,
    StructureMismatchError,
    ValidationError,
)
from .frames import (
    FrameReport,
    RieszReport,
    brute_force_frame_bounds,
    fiber_frame_bounds,
    is_riesz_basis,
)
from .groups import (
    DUAL,
    PRIMAL,
    GroupElement,
    GroupSpec,
    Section,
    Subgroup,
    annihilator,
    coset_decompose,
    full_subgroup,
    pairing,
    section,
    subgroup_from_generators,
    trivial_subgroup,
)
from .metric import (
    MetricReport,
    cauchy_limit,
    dimension_rigidity_check,
    minimal_generator_count,
    mod_metric,
    nested_distance_check,
)
from .spaces import (
    MembershipResult,
    ModInvariantSpace,
    RangeFunction,
    fiberization_membership,
    fiberization_range_function,
    is_modulation_invariant,
    membership,
    mod_invariant_space,
    project,
    range_function_from_generators,
    space_from_support,
)
from .transforms import (
    FiberMatrix,
    FiberizationMatrix,
    Signal,
    dft,
    dft_naive,
    fiberization,
    inverse_dft,
    inverse_mod_zak,
    inverse_zak,
    mod_zak,
    modulate,
    translate,
    zak,
)

__version__ = "0.1.0"
