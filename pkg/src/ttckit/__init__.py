"""Top trading cycles for housing markets, plus a spectral ordering
heuristic, brute-force property audits, and a scaling benchmark."""

from ttckit.audit import (
    AuditReport,
    ComparisonSummary,
    build_report,
    check_individual_rationality,
    check_pareto_efficiency,
    compare_methods,
    probe_strategy_proofness,
)
from ttckit.bench import BenchRecord, fit_exponents, run_bench, write_csv
from ttckit.classical import (
    TopChoiceGraph,
    chase_assignment,
    find_cycles,
    solve_classical,
    top_active_choice,
    top_choice_graph,
)
from ttckit.errors import (
    ConvergenceError,
    EmptyInputError,
    InputError,
    NoActiveObjectsError,
    NonSquareError,
    NotPermutationError,
    OutOfRangeError,
    TooLargeError,
    TTCError,
)
from ttckit.generator import GeneratorConfig, generate, generate_one, write_batch
from ttckit.model import (
    Allocation,
    Endowment,
    Instance,
    PickTrace,
    PreferenceProfile,
    RoundTrace,
    validate_profile,
)
from ttckit.reference import EXAMPLE1, EXAMPLE2, run_repro
from ttckit.serialize import (
    dumps_allocation,
    dumps_instance,
    load_allocation,
    load_instance,
    load_preferences_csv,
    parse_allocation,
    parse_instance,
    parse_preferences_csv,
    save_allocation,
    save_instance,
)
from ttckit.spectral import (
    ColumnStochasticMatrix,
    OrderingVector,
    SpectralResult,
    WeightMatrix,
    build_weight_matrix,
    leading_singular_vector,
    normalize_columns,
    pick_order,
    run_pipeline,
    serial_dictatorship,
    solve_spectral,
)

__version__ = "0.1.0"

__all__ = [
    "Allocation",
    "AuditReport",
    "BenchRecord",
    "ColumnStochasticMatrix",
    "ComparisonSummary",
    "ConvergenceError",
    "EXAMPLE1",
    "EXAMPLE2",
    "EmptyInputError",
    "Endowment",
    "GeneratorConfig",
    "InputError",
    "Instance",
    "NoActiveObjectsError",
    "NonSquareError",
    "NotPermutationError",
    "OrderingVector",
    "OutOfRangeError",
    "PickTrace",
    "PreferenceProfile",
    "RoundTrace",
    "SpectralResult",
    "TTCError",
    "TooLargeError",
    "TopChoiceGraph",
    "WeightMatrix",
    "build_report",
    "build_weight_matrix",
    "chase_assignment",
    "check_individual_rationality",
    "check_pareto_efficiency",
    "compare_methods",
    "dumps_allocation",
    "dumps_instance",
    "find_cycles",
    "fit_exponents",
    "generate",
    "generate_one",
    "leading_singular_vector",
    "load_allocation",
    "load_instance",
    "load_preferences_csv",
    "normalize_columns",
    "parse_allocation",
    "parse_instance",
    "parse_preferences_csv",
    "pick_order",
    "probe_strategy_proofness",
    "run_bench",
    "run_pipeline",
    "run_repro",
    "save_allocation",
    "save_instance",
    "serial_dictatorship",
    "solve_classical",
    "solve_spectral",
    "top_active_choice",
    "top_choice_graph",
    "validate_profile",
    "write_batch",
    "write_csv",
]
