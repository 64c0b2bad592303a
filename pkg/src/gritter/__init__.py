"""Winter road maintenance routing: solver, checker, and lower bounds."""

from gritter.model import (
    CAR_METHODS,
    Crossroad,
    GritterError,
    Method,
    Road,
    RoadNetwork,
    effective_length_km,
    effective_length_m,
    maintainable_by,
    shortest_path,
    validate_network,
)
from gritter.plans import (
    DisconnectedPlanError,
    MaintenancePlan,
    Solution,
    TourStep,
    check_feasible,
    check_monotonic,
    check_plan,
    compare_solutions,
    monotone_levels,
    plan_deadhead_m,
    plan_load_m,
    plan_ok,
    plan_to_tour,
    solution_objective,
)

__version__ = "0.1.0"

__all__ = [
    "CAR_METHODS",
    "Crossroad",
    "DisconnectedPlanError",
    "GritterError",
    "MaintenancePlan",
    "Method",
    "Road",
    "RoadNetwork",
    "Solution",
    "TourStep",
    "check_feasible",
    "check_monotonic",
    "check_plan",
    "compare_solutions",
    "effective_length_km",
    "effective_length_m",
    "maintainable_by",
    "monotone_levels",
    "plan_deadhead_m",
    "plan_load_m",
    "plan_ok",
    "plan_to_tour",
    "shortest_path",
    "solution_objective",
    "validate_network",
]
