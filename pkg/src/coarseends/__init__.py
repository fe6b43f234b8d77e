"""End-space estimation for groups and coarse spaces from finite windows."""

from .almost_invariant import (
    AlmostInvarianceReport,
    NccReport,
    SetOracle,
    almost_invariant_verdict,
    crosscheck_clopen_vs_almost_invariant,
    disjoint_ncc_count,
    oracle_from_members,
    symmetric_difference_window,
)
from .covers import (
    CoarseEndApprox,
    CoverScale,
    approximate_ends,
    ball_cover_scale,
    bounded_in,
    cover_coarsely_clopen,
    deep_component_candidates,
    intersection_boundary_check,
    star,
    star_composition,
    star_preserves_clopen_check,
    window_to_cover_scale,
)
from .ends_tree import (
    ComponentTree,
    EndsVerdict,
    annulus_components,
    build_component_tree,
    classify_ends,
    geodesic_coarse_check,
)
from .equivalence import BatteryReport, run_battery
from .errors import (
    BallTooLarge,
    CertificationFailed,
    CoarseEndsError,
    EmptyAlgebra,
    Exceeds,
    InvalidRadii,
    NotUltrametric,
    PointOutsideWindow,
    PreconditionViolated,
)
from .fixtures import battery_fixtures
from .glacial import (
    GlacialScale,
    canonical_scale_family,
    chain_absorption_check,
    coarsely_clopen_grid,
    coarsely_clopen_window_check,
    glacial_oscillation_test,
    is_s_chain,
    m_components,
    s_components,
    scale_from_balls,
    slow_oscillation_profile,
)
from .groups import (
    CyclicGroup,
    DirectProduct,
    ExtendedGenerators,
    FactorialRationals,
    FreeGroup,
    FreeProductCyclic,
    GroupOracle,
    IntLattice,
    IntLine,
    RestrictedSumZ2,
    builtin_groups,
)
from .report import render_report, to_jsonable, tree_to_dot
from .windows import DEFAULT_MEMORY_CAP, FiniteWindow, generate_window, word_norm

__all__ = [
    "AlmostInvarianceReport",
    "NccReport",
    "SetOracle",
    "almost_invariant_verdict",
    "crosscheck_clopen_vs_almost_invariant",
    "disjoint_ncc_count",
    "oracle_from_members",
    "symmetric_difference_window",
    "CoarseEndApprox",
    "CoverScale",
    "approximate_ends",
    "ball_cover_scale",
    "bounded_in",
    "cover_coarsely_clopen",
    "deep_component_candidates",
    "intersection_boundary_check",
    "star",
    "star_composition",
    "star_preserves_clopen_check",
    "window_to_cover_scale",
    "ComponentTree",
    "EndsVerdict",
    "annulus_components",
    "build_component_tree",
    "classify_ends",
    "geodesic_coarse_check",
    "BatteryReport",
    "run_battery",
    "BallTooLarge",
    "CertificationFailed",
    "CoarseEndsError",
    "EmptyAlgebra",
    "Exceeds",
    "InvalidRadii",
    "NotUltrametric",
    "PointOutsideWindow",
    "PreconditionViolated",
    "battery_fixtures",
    "GlacialScale",
    "canonical_scale_family",
    "chain_absorption_check",
    "coarsely_clopen_grid",
    "coarsely_clopen_window_check",
    "glacial_oscillation_test",
    "is_s_chain",
    "m_components",
    "s_components",
    "scale_from_balls",
    "slow_oscillation_profile",
    "CyclicGroup",
    "DirectProduct",
    "ExtendedGenerators",
    "FactorialRationals",
    "FreeGroup",
    "FreeProductCyclic",
    "GroupOracle",
    "IntLattice",
    "IntLine",
    "RestrictedSumZ2",
    "builtin_groups",
    "render_report",
    "to_jsonable",
    "tree_to_dot",
    "DEFAULT_MEMORY_CAP",
    "FiniteWindow",
    "generate_window",
    "word_norm",
]
