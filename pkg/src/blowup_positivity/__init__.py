"""Positivity of divisor classes on blow-ups of projective space at general points."""

__version__ = "0.1.0"

from .divisor import (
    BaseLocusDecomposition,
    BaseLocusEntry,
    CycleIndex,
    DivisorClass,
    StrictTransformClass,
    base_locus,
    combine,
    join_dimension,
    join_multiplicity,
    linear_multiplicity,
    scale,
    strict_transform,
)
from .positivity import (
    GGStatus,
    GGVerdict,
    b_zero,
    gg_degree_bound,
    is_bpf_full_transform,
    is_globally_generated,
    vanishing_bound_check,
)
from .mzero import (
    FCurve,
    MZeroDivisor,
    A_coefficient,
    B_coefficient,
    boundary_divisor,
    cremona_hyperplane,
    embed_strict_transform,
    fcurve_intersect_boundary,
    fulton_certify,
    is_fnef,
)
from .secant import (
    JoinIntersection,
    alpha_interval,
    beta_interval,
    decompose,
    gamma_class,
    join_intersection,
    k_on_fixed_divisor,
    ldim,
    sigma_class,
    sldim,
)
from .log_pairs import (
    DiscrepancyReport,
    LogPair,
    abundance_condition,
    adjoint_class,
    canonical_class,
    derived_bounds,
    discrepancies,
    is_lc,
)
from .oracle import (
    InterpolationResult,
    PointConfiguration,
    base_point_probe,
    conditions_matrix,
    h0,
    sample_config,
    verify_dimension,
)
