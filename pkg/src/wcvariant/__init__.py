"""Drivetrain hazard-potential characteristics and worst-case variant selection.

The library computes, per vehicle variant, how hazardous a full-torque
drivetrain fault is in two framing situations (cornering on a slippery road;
accelerating straight ahead), ranks variant catalogs by those
characteristics, and searches bounded parameter boxes for worst-case
parameter combinations. The ``wcvariant`` CLI wraps the same operations.
"""

__version__ = "0.1.0"

from .analysis import (
    Assessment,
    ParameterBox,
    SearchConfig,
    SearchResult,
    SearchStep,
    UseCase,
    UseCaseKind,
    assess_variant,
    rank_catalog,
    worst_case_search,
)
from .catalog import (
    Catalog,
    ReportHeader,
    Scenario,
    builtin_catalog,
    builtin_scenarios,
    format_characteristic,
    gear_label,
    parse_catalog,
    parse_scenario,
    serialize_catalog,
    serialize_report,
    serialize_scenario,
)
from .characteristics import (
    AccPotential,
    MuPotential,
    acceleration_assessment,
    loss_of_traction_assessment,
    p_acc_components,
    p_mu_axle,
)
from .errors import (
    DegenerateGeometry,
    DuplicateName,
    EmptyCatalog,
    InvalidGear,
    InvalidParameter,
    NoFeasiblePoint,
    ParseError,
    SingularSystem,
    ValidationError,
    VariantAnalysisError,
    ZeroFrictionLimit,
)
from .forces import (
    GRAVITY_MPS2,
    Axle,
    AxleEngine,
    AxleForces,
    FrictionContext,
    LateralModel,
    VehicleVariant,
    axle_torques,
    friction_limits,
    lateral_forces_decoupled,
    lateral_forces_single_track,
    longitudinal_forces,
    static_normal_loads,
)
from .geometry import STRAIGHT, CurveFrame, SteeringGeometry, steering_geometry

__all__ = [
    "__version__",
    "Assessment",
    "ParameterBox",
    "SearchConfig",
    "SearchResult",
    "SearchStep",
    "UseCase",
    "UseCaseKind",
    "assess_variant",
    "rank_catalog",
    "worst_case_search",
    "Catalog",
    "ReportHeader",
    "Scenario",
    "builtin_catalog",
    "builtin_scenarios",
    "format_characteristic",
    "gear_label",
    "parse_catalog",
    "parse_scenario",
    "serialize_catalog",
    "serialize_report",
    "serialize_scenario",
    "AccPotential",
    "MuPotential",
    "acceleration_assessment",
    "loss_of_traction_assessment",
    "p_acc_components",
    "p_mu_axle",
    "DegenerateGeometry",
    "DuplicateName",
    "EmptyCatalog",
    "InvalidGear",
    "InvalidParameter",
    "NoFeasiblePoint",
    "ParseError",
    "SingularSystem",
    "ValidationError",
    "VariantAnalysisError",
    "ZeroFrictionLimit",
    "GRAVITY_MPS2",
    "Axle",
    "AxleEngine",
    "AxleForces",
    "FrictionContext",
    "LateralModel",
    "VehicleVariant",
    "axle_torques",
    "friction_limits",
    "lateral_forces_decoupled",
    "lateral_forces_single_track",
    "longitudinal_forces",
    "static_normal_loads",
    "STRAIGHT",
    "CurveFrame",
    "SteeringGeometry",
    "steering_geometry",
]
