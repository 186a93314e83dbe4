"""Obstacle-aware UAV access-point placement and throughput evaluation."""

from .evaluation import (
    LinkReport,
    PositionReport,
    ThroughputTrace,
    aggregate_throughput,
    compare_positions,
    link_report,
    throughput_trace,
)
from .geometry import (
    BoxObstacle,
    DegenerateSegmentError,
    Point3,
    corner_elevation_angle,
    has_los,
    segment_intersects_box,
    uav_elevation_angle,
)
from .radio import (
    InfeasibleDemandError,
    McsEntry,
    McsTable,
    RadioConfig,
    default_mcs_table,
    k_constant,
    max_distance_m,
    mcs_from_snr,
    nlos_snr_db,
    required_mcs,
    snr_db,
)
from .scenario import (
    EvalParams,
    Scenario,
    ScenarioError,
    ScenarioFormatError,
    ScenarioValidationError,
    SearchBounds,
    UserEquipment,
    dumps_scenario,
    load_scenario,
    load_scenario_file,
    validate,
    with_demands,
)
from .solver import (
    FeasibilityContext,
    InfeasiblePositionError,
    Solution,
    build_context,
    is_feasible,
    min_power_bruteforce,
    sample_feasible_region,
    solve_position,
)

__version__ = "0.1.0"

__all__ = [
    "BoxObstacle",
    "DegenerateSegmentError",
    "EvalParams",
    "FeasibilityContext",
    "InfeasibleDemandError",
    "InfeasiblePositionError",
    "LinkReport",
    "McsEntry",
    "McsTable",
    "Point3",
    "PositionReport",
    "RadioConfig",
    "Scenario",
    "ScenarioError",
    "ScenarioFormatError",
    "ScenarioValidationError",
    "SearchBounds",
    "Solution",
    "ThroughputTrace",
    "UserEquipment",
    "aggregate_throughput",
    "build_context",
    "compare_positions",
    "corner_elevation_angle",
    "default_mcs_table",
    "dumps_scenario",
    "has_los",
    "is_feasible",
    "k_constant",
    "link_report",
    "load_scenario",
    "load_scenario_file",
    "max_distance_m",
    "mcs_from_snr",
    "min_power_bruteforce",
    "nlos_snr_db",
    "required_mcs",
    "sample_feasible_region",
    "segment_intersects_box",
    "snr_db",
    "solve_position",
    "throughput_trace",
    "uav_elevation_angle",
    "validate",
    "with_demands",
]
