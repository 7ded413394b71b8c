"""Filled-function global search for box-constrained integer programs."""
from .benchmarks import (
    APPENDIX_RUNS,
    BenchmarkProblem,
    PROBLEM_FACTORIES,
    brute_force_min,
    evaluate,
    expand_start_pattern,
    get_problem,
    registry,
)
from .core import (
    BoxDomain,
    BudgetExhausted,
    DomainError,
    EvalCounter,
    ObjectiveFunction,
    ParameterError,
    argmin_over_neighborhood,
    as_int_point,
    as_real_point,
    axis_directions,
    discrete_path,
    is_discrete_local_min,
    neighborhood,
    neighborhood_argmin,
    point_key,
    round_point,
)
from .filled import (
    AugmentedFilled,
    BoundCheck,
    FILLED_FUNCTIONS,
    FilledParams,
    InverseSquareFilled,
    filled_value,
    lattice_penalty,
    make_filled,
    register_filled_function,
    rounding_error_check,
    smoothed_ramp,
    smoothed_step,
)
from .local_search import (
    CompassSearch,
    ContractReport,
    MINIMIZERS,
    QuasiNewton,
    SearchTrace,
    make_minimizer,
    minimize_continuous,
    neighbor_descent_statistic,
    steepest_descent_discrete,
    verify_descent_contract,
)
from .solver import (
    SolveReport,
    SolverConfig,
    generic_filled_search,
    solve,
    solve_problem,
    vertex_check,
)

__all__ = [
    "APPENDIX_RUNS",
    "AugmentedFilled",
    "BenchmarkProblem",
    "BoundCheck",
    "BoxDomain",
    "BudgetExhausted",
    "CompassSearch",
    "ContractReport",
    "DomainError",
    "EvalCounter",
    "FILLED_FUNCTIONS",
    "FilledParams",
    "InverseSquareFilled",
    "MINIMIZERS",
    "ObjectiveFunction",
    "PROBLEM_FACTORIES",
    "ParameterError",
    "QuasiNewton",
    "SearchTrace",
    "SolveReport",
    "SolverConfig",
    "argmin_over_neighborhood",
    "as_int_point",
    "as_real_point",
    "axis_directions",
    "brute_force_min",
    "discrete_path",
    "evaluate",
    "expand_start_pattern",
    "filled_value",
    "generic_filled_search",
    "get_problem",
    "is_discrete_local_min",
    "lattice_penalty",
    "make_filled",
    "make_minimizer",
    "minimize_continuous",
    "neighbor_descent_statistic",
    "neighborhood",
    "neighborhood_argmin",
    "point_key",
    "register_filled_function",
    "registry",
    "round_point",
    "rounding_error_check",
    "smoothed_ramp",
    "smoothed_step",
    "solve",
    "solve_problem",
    "steepest_descent_discrete",
    "verify_descent_contract",
    "vertex_check",
]

__version__ = "0.1.0"
