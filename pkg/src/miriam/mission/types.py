"""Mission domain types: plan, vehicles, objectives, telemetry and events.

Geometry is local Cartesian meters (x east, y north) relative to the plan
origin lat/lon; the core never does geodesy.  Time is mission-relative
seconds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional


class MissionError(Exception):
    """Base class for mission-domain errors."""


class PlanValidationError(MissionError):
    """A plan document violates a structural invariant."""


class UnknownVehicleError(MissionError):
    def __init__(self, vehicle_id: str):
        super().__init__(f"unknown vehicle: {vehicle_id!r}")
        self.vehicle_id = vehicle_id


class UnknownObjectiveError(MissionError):
    def __init__(self, name: str):
        super().__init__(f"unknown objective: {name!r}")
        self.name = name


class ObjectiveKind(str, Enum):
    SURVEY = "survey"
    TRANSIT = "transit"
    INSPECT = "inspect"


class Health(str, Enum):
    NOMINAL = "nominal"
    DEGRADED = "degraded"
    FAULT = "fault"


class EventType(str, Enum):
    OBJECTIVE_STARTED = "objective_started"
    OBJECTIVE_COMPLETED = "objective_completed"
    OBJECTIVE_CHANGED = "objective_changed"
    OBSTACLE_DETECTED = "obstacle_detected"
    TARGET_DETECTED = "target_detected"
    FAULT = "fault"
    BATTERY_WARNING = "battery_warning"
    BATTERY_CRITICAL = "battery_critical"
    MISSION_COMPLETED = "mission_completed"
    REPORT = "report"


# Event types whose subject must name an objective in the plan.
OBJECTIVE_EVENT_TYPES = frozenset(
    {
        EventType.OBJECTIVE_STARTED,
        EventType.OBJECTIVE_COMPLETED,
        EventType.OBJECTIVE_CHANGED,
    }
)


class ObjectiveState(str, Enum):
    PENDING = "pending"
    ACTIVE = "active"
    COMPLETED = "completed"
    CHANGED = "changed"


@dataclass(frozen=True)
class Waypoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise PlanValidationError(f"non-finite waypoint: ({self.x}, {self.y})")

    def distance_to(self, other: "Waypoint") -> float:
        return math.hypot(other.x - self.x, other.y - self.y)


@dataclass
class VehicleSpec:
    vehicle_id: str
    cruise_speed: float
    battery_drain_rate: float = 0.0
    battery_capacity_pct: float = 100.0

    def validate(self) -> None:
        if not self.vehicle_id:
            raise PlanValidationError("vehicle id must be non-empty")
        if self.cruise_speed <= 0:
            raise PlanValidationError(
                f"vehicle {self.vehicle_id!r}: cruise_speed must be > 0"
            )
        if self.battery_drain_rate < 0:
            raise PlanValidationError(
                f"vehicle {self.vehicle_id!r}: battery_drain_rate must be >= 0"
            )


@dataclass
class Objective:
    name: str
    kind: ObjectiveKind
    vehicle_id: str
    waypoints: list[Waypoint]
    depth: float = 0.0

    def validate(self) -> None:
        if not self.name:
            raise PlanValidationError("objective name must be non-empty")
        if not self.waypoints:
            raise PlanValidationError(f"objective {self.name!r}: empty waypoints")
        if self.depth < 0:
            raise PlanValidationError(f"objective {self.name!r}: negative depth")
        for a, b in zip(self.waypoints, self.waypoints[1:]):
            if a == b:
                raise PlanValidationError(
                    f"objective {self.name!r}: consecutive identical waypoints"
                )

    def path_length(self) -> float:
        return sum(a.distance_to(b) for a, b in zip(self.waypoints, self.waypoints[1:]))


@dataclass
class MissionPlan:
    plan_id: str
    origin_lat: float
    origin_lon: float
    vehicles: list[VehicleSpec]
    objectives: list[Objective]

    def validate(self) -> None:
        if not self.plan_id:
            raise PlanValidationError("plan_id must be non-empty")
        if not self.vehicles:
            raise PlanValidationError("no vehicles")
        if not self.objectives:
            raise PlanValidationError("no objectives")
        seen_vehicles: set[str] = set()
        for v in self.vehicles:
            v.validate()
            key = v.vehicle_id.casefold()
            if key in seen_vehicles:
                raise PlanValidationError(f"duplicate vehicle id: {v.vehicle_id!r}")
            seen_vehicles.add(key)
        seen_objectives: set[str] = set()
        for o in self.objectives:
            o.validate()
            key = o.name.casefold()
            if key in seen_objectives:
                raise PlanValidationError(f"duplicate objective name: {o.name!r}")
            seen_objectives.add(key)
            if o.vehicle_id.casefold() not in seen_vehicles:
                raise PlanValidationError(
                    f"objective {o.name!r}: unknown vehicle_id {o.vehicle_id!r}"
                )

    def vehicle(self, vehicle_id: str) -> VehicleSpec:
        for v in self.vehicles:
            if v.vehicle_id.casefold() == vehicle_id.casefold():
                return v
        raise UnknownVehicleError(vehicle_id)

    def objective(self, name: str) -> Objective:
        for o in self.objectives:
            if o.name.casefold() == name.casefold():
                return o
        raise UnknownObjectiveError(name)

    def objectives_for(self, vehicle_id: str) -> list[Objective]:
        return [o for o in self.objectives if o.vehicle_id.casefold() == vehicle_id.casefold()]

    def has_objective(self, name: str) -> bool:
        return any(o.name.casefold() == name.casefold() for o in self.objectives)


@dataclass
class VehicleState:
    t: float
    vehicle_id: str
    x: float
    y: float
    depth: float = 0.0
    heading: float = 0.0
    speed: float = 0.0
    battery_pct: float = 100.0
    active_objective: Optional[str] = None
    health: Health = Health.NOMINAL


@dataclass
class MissionEvent:
    t: float
    vehicle_id: str
    type: EventType
    subject: str = ""
    detail: str = ""


@dataclass
class ObjectiveProgress:
    """Derived lifecycle record for one objective, maintained from events."""

    status: ObjectiveState = ObjectiveState.PENDING
    start_t: Optional[float] = None
    finish_t: Optional[float] = None


@dataclass
class FaultRecord:
    code: str
    t: float
    detail: str
    acknowledged: bool = False


@dataclass
class DerivedChange:
    """What an event ingest changed, for the alerting layer."""

    event: MissionEvent
    transitions: list[tuple[str, ObjectiveState, ObjectiveState]] = field(
        default_factory=list
    )
    geometry_changed: bool = False
