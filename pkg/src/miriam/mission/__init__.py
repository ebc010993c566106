from .types import (
    DerivedChange,
    EventType,
    FaultRecord,
    Health,
    MissionError,
    MissionEvent,
    MissionPlan,
    Objective,
    ObjectiveKind,
    ObjectiveProgress,
    ObjectiveState,
    PlanValidationError,
    UnknownObjectiveError,
    UnknownVehicleError,
    VehicleSpec,
    VehicleState,
    Waypoint,
)
from .plan import (
    PlanSyntaxError,
    event_to_record,
    load_plan,
    load_plan_file,
    parse_stream_line,
    plan_to_doc,
    record_to_line,
    state_to_record,
)
from .store import EtaResult, MissionStore, replay_journal

__all__ = [
    "DerivedChange",
    "EtaResult",
    "EventType",
    "FaultRecord",
    "Health",
    "MissionError",
    "MissionEvent",
    "MissionPlan",
    "MissionStore",
    "Objective",
    "ObjectiveKind",
    "ObjectiveProgress",
    "ObjectiveState",
    "PlanSyntaxError",
    "PlanValidationError",
    "UnknownObjectiveError",
    "UnknownVehicleError",
    "VehicleSpec",
    "VehicleState",
    "Waypoint",
    "event_to_record",
    "load_plan",
    "load_plan_file",
    "parse_stream_line",
    "plan_to_doc",
    "record_to_line",
    "replay_journal",
    "state_to_record",
]
