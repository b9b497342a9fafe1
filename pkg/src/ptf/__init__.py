"""Exact counting and certified bounds for polynomial threshold functions."""

from .arrangements import (
    Arrangement,
    RegionCountReport,
    count_intersection_subspaces,
    count_regions,
    in_general_position,
    parse_arrangement,
    region_upper_bound,
    serialize_arrangement,
)
from .bounds import (
    BoundReport,
    ScanEntry,
    ScanReport,
    binom_sum,
    check_lemma_A1,
    check_lemma_A2,
    check_lemma_A3,
    main_theorem_bounds,
    run_scan,
    scan_case1_crossing,
    scan_case3,
    scan_case4,
    scan_case5,
    scan_lemma_A1,
    scan_lemma_A2,
    scan_lemma_A3,
)
from .capacity import (
    CapacityReport,
    PointSet,
    capacity_set,
    general_lift,
    monomial_exponents,
    parse_points_csv,
)
from .cube_lift import (
    CubePoint,
    LiftMatrix,
    LiftedVector,
    MonomialIndex,
    cube_lift_matrix,
    enumerate_cube,
    full_cube_lift_rank,
    lift,
    lift_matrix,
    monomial_indices,
)
from .errors import (
    DimensionMismatchError,
    InvalidInputError,
    PTFError,
    ResourceLimitError,
    UndecidedComparisonError,
    VerificationError,
)
from .fixtures import (
    FixtureCheck,
    FixtureReport,
    fixtures_path,
    load_fixtures,
    verify_fixtures,
)
from .linalg_exact import (
    BigRational,
    FeasibilityResult,
    RationalMatrix,
    SpanSolver,
    det,
    rank,
    solve_in_span,
    strict_feasible,
    strict_feasible_affine,
)
from .ptf_count import (
    BoundsCheck,
    PTFCountResult,
    count_ptf,
    oracle_count_ptf,
    verify_upper_bounds,
)
from .random_tensors import (
    ExperimentConfig,
    MCReport,
    RegimeCheck,
    ResilienceVerdict,
    good_subset_fraction,
    independence_probability_exhaustive,
    littlewood_offord_P,
    lo_distribution,
    lo_empirical,
    lo_probability_exact,
    mc_independence,
    resilience_check,
    subset_verdicts,
    theorem41_parameter_check,
)

__version__ = "0.1.0"

__all__ = [
    "Arrangement",
    "BigRational",
    "BoundReport",
    "BoundsCheck",
    "CapacityReport",
    "CubePoint",
    "DimensionMismatchError",
    "ExperimentConfig",
    "FeasibilityResult",
    "FixtureCheck",
    "FixtureReport",
    "InvalidInputError",
    "LiftMatrix",
    "LiftedVector",
    "MCReport",
    "MonomialIndex",
    "PTFCountResult",
    "PTFError",
    "PointSet",
    "RationalMatrix",
    "RegimeCheck",
    "RegionCountReport",
    "ResilienceVerdict",
    "ResourceLimitError",
    "ScanEntry",
    "ScanReport",
    "SpanSolver",
    "UndecidedComparisonError",
    "VerificationError",
    "binom_sum",
    "capacity_set",
    "check_lemma_A1",
    "check_lemma_A2",
    "check_lemma_A3",
    "count_intersection_subspaces",
    "count_ptf",
    "count_regions",
    "cube_lift_matrix",
    "det",
    "enumerate_cube",
    "fixtures_path",
    "full_cube_lift_rank",
    "general_lift",
    "good_subset_fraction",
    "in_general_position",
    "independence_probability_exhaustive",
    "lift",
    "lift_matrix",
    "littlewood_offord_P",
    "lo_distribution",
    "lo_empirical",
    "lo_probability_exact",
    "load_fixtures",
    "main_theorem_bounds",
    "mc_independence",
    "monomial_exponents",
    "monomial_indices",
    "oracle_count_ptf",
    "parse_arrangement",
    "parse_points_csv",
    "rank",
    "region_upper_bound",
    "resilience_check",
    "run_scan",
    "scan_case1_crossing",
    "scan_case3",
    "scan_case4",
    "scan_case5",
    "scan_lemma_A1",
    "scan_lemma_A2",
    "scan_lemma_A3",
    "serialize_arrangement",
    "solve_in_span",
    "strict_feasible",
    "strict_feasible_affine",
    "subset_verdicts",
    "theorem41_parameter_check",
    "verify_fixtures",
    "verify_upper_bounds",
    "__version__",
]
