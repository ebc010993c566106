"""In-memory mission store: telemetry/event ingestion and structured queries.

Single-writer (the simulation tick), multi-reader (chat sessions).  All
public methods take the store lock, so readers always observe a consistent
snapshot: an event is never visible without its derived status change.

ETA, ETC and progress are computed on an arc-length model of each
vehicle's planned route: the polyline from the vehicle start through every
waypoint of its objectives in plan order (connecting segments between
objectives included, since the vehicle physically traverses them).  The
current position is projected onto the route to obtain the traversed arc
length; replanned geometry (detours, appended objectives) rebuilds the
route.
"""

from __future__ import annotations

import json
import logging
import math
import threading
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .plan import event_to_record, record_to_line, state_to_record
from .types import (
    DerivedChange,
    EventType,
    FaultRecord,
    MissionEvent,
    MissionPlan,
    Objective,
    ObjectiveKind,
    ObjectiveProgress,
    ObjectiveState,
    OBJECTIVE_EVENT_TYPES,
    UnknownObjectiveError,
    UnknownVehicleError,
    VehicleState,
    Waypoint,
)

logger = logging.getLogger(__name__)

# Below this measured speed the cruise speed is used for ETA, to avoid
# division blow-up near zero.
MIN_SPEED_FOR_ETA = 0.1

VEHICLE_START = Waypoint(0.0, 0.0)


@dataclass
class EtaResult:
    kind: str  # "eta" | "completed" | "unreachable" | "no_data"
    seconds: Optional[float] = None
    distance_m: Optional[float] = None
    speed_mps: Optional[float] = None
    finish_t: Optional[float] = None
    target_label: str = ""
    reason: str = ""


@dataclass
class RoutePoint:
    waypoint: Waypoint
    arc: float  # cumulative path length from route start
    objective: Optional[str] = None  # objective owning this waypoint


@dataclass
class Route:
    points: list[RoutePoint] = field(default_factory=list)

    @property
    def total(self) -> float:
        return self.points[-1].arc if self.points else 0.0

    def arc_at(self, x: float, y: float) -> float:
        """Arc-length coordinate of the route point nearest to (x, y).

        Projects onto every leg and keeps the closest one; ties (corner
        points) resolve to the later leg, which carries the same arc.
        """
        best_d = math.inf
        best_arc = 0.0
        for a, b in zip(self.points, self.points[1:]):
            ax, ay = a.waypoint.x, a.waypoint.y
            bx, by = b.waypoint.x, b.waypoint.y
            dx, dy = bx - ax, by - ay
            seg2 = dx * dx + dy * dy
            if seg2 == 0.0:
                frac = 0.0
            else:
                frac = ((x - ax) * dx + (y - ay) * dy) / seg2
                frac = min(1.0, max(0.0, frac))
            px, py = ax + frac * dx, ay + frac * dy
            d = math.hypot(x - px, y - py)
            if d <= best_d + 1e-9:
                best_d = d
                best_arc = a.arc + frac * math.sqrt(seg2)
        return best_arc

    def arc_of_waypoint(self, objective: str, last: bool) -> Optional[float]:
        """Arc of an objective's first (or last) waypoint, or None."""
        arcs = [p.arc for p in self.points if p.objective == objective]
        if not arcs:
            return None
        return arcs[-1] if last else arcs[0]


class MissionStore:
    """Queryable store over one mission plan and its live data streams."""

    def __init__(self, plan: MissionPlan, journal_path: Optional[str] = None):
        self._lock = threading.RLock()
        self.plan = plan
        self._states: dict[str, list[VehicleState]] = {
            v.vehicle_id: [] for v in plan.vehicles
        }
        self._events: list[MissionEvent] = []
        self._objective_status: dict[str, ObjectiveProgress] = {
            o.name: ObjectiveProgress() for o in plan.objectives
        }
        self._fault_acks: set[tuple[str, str]] = set()
        self._routes: dict[str, Route] = {}
        self._routes_dirty = True
        self._journal = open(journal_path, "a", encoding="utf-8") if journal_path else None

    # -- ingestion ----------------------------------------------------------

    def ingest_state(self, s: VehicleState) -> bool:
        """Append a telemetry sample.  Returns False if dropped.

        Unknown vehicles raise; non-monotone timestamps are dropped with a
        log line so a glitching feed does not kill the stream.
        """
        with self._lock:
            if s.vehicle_id not in self._states:
                raise UnknownVehicleError(s.vehicle_id)
            series = self._states[s.vehicle_id]
            if series and s.t <= series[-1].t:
                logger.warning(
                    "dropping non-monotone telemetry for %s: t=%s after t=%s",
                    s.vehicle_id, s.t, series[-1].t,
                )
                return False
            series.append(s)
            self._journal_write(state_to_record(s))
            return True

    def ingest_event(self, e: MissionEvent) -> DerivedChange:
        """Append an event and update derived objective status."""
        with self._lock:
            if e.vehicle_id and e.vehicle_id not in self._states:
                raise UnknownVehicleError(e.vehicle_id)
            change = DerivedChange(event=e)
            if e.type in OBJECTIVE_EVENT_TYPES:
                appended = False
                if not self.plan.has_objective(e.subject):
                    if e.type is EventType.OBJECTIVE_CHANGED and self._try_append_objective(e):
                        change.geometry_changed = True
                        appended = True
                    else:
                        raise UnknownObjectiveError(e.subject)
                name = self.plan.objective(e.subject).name
                prog = self._objective_status[name]
                old = prog.status
                if e.type is EventType.OBJECTIVE_STARTED:
                    if prog.status is not ObjectiveState.COMPLETED:
                        prog.status = ObjectiveState.ACTIVE
                    if prog.start_t is None:
                        prog.start_t = e.t
                elif e.type is EventType.OBJECTIVE_COMPLETED:
                    prog.status = ObjectiveState.COMPLETED
                    prog.finish_t = e.t
                elif e.type is EventType.OBJECTIVE_CHANGED and not appended:
                    if prog.status is not ObjectiveState.COMPLETED:
                        prog.status = ObjectiveState.CHANGED
                    if self._apply_geometry_detail(name, e.detail):
                        change.geometry_changed = True
                if prog.status is not old:
                    change.transitions.append((name, old, prog.status))
            self._events.append(e)
            self._journal_write(event_to_record(e))
            return change

    def _try_append_objective(self, e: MissionEvent) -> bool:
        """Create a new objective from an objective_changed append payload."""
        try:
            detail = json.loads(e.detail) if e.detail else {}
        except json.JSONDecodeError:
            return False
        if not detail.get("append"):
            return False
        waypoints = [Waypoint(float(w[0]), float(w[1])) for w in detail.get("waypoints", [])]
        if not waypoints:
            return False
        obj = Objective(
            name=e.subject,
            kind=ObjectiveKind(detail.get("kind", "inspect")),
            vehicle_id=detail.get("vehicle_id", e.vehicle_id),
            waypoints=waypoints,
            depth=float(detail.get("depth", 0.0)),
        )
        self.plan.objectives.append(obj)
        self._objective_status[obj.name] = ObjectiveProgress()
        self._routes_dirty = True
        return True

    def _apply_geometry_detail(self, name: str, detail: str) -> bool:
        """Replace an objective's waypoints from a replan event payload."""
        if not detail:
            return False
        try:
            doc = json.loads(detail)
        except json.JSONDecodeError:
            return False
        waypoints = doc.get("waypoints")
        if not waypoints:
            return False
        obj = self.plan.objective(name)
        obj.waypoints = [Waypoint(float(w[0]), float(w[1])) for w in waypoints]
        self._routes_dirty = True
        return True

    def _journal_write(self, record: dict) -> None:
        if self._journal is not None:
            self._journal.write(record_to_line(record) + "\n")
            self._journal.flush()

    # -- queries ------------------------------------------------------------

    def latest_state(self, vehicle_id: str) -> Optional[VehicleState]:
        with self._lock:
            if vehicle_id not in self._states:
                raise UnknownVehicleError(vehicle_id)
            series = self._states[vehicle_id]
            return series[-1] if series else None

    def objective_status(self, name: str) -> ObjectiveProgress:
        with self._lock:
            canonical = self.plan.objective(name).name
            prog = self._objective_status[canonical]
            return ObjectiveProgress(prog.status, prog.start_t, prog.finish_t)

    def all_objective_status(self) -> dict[str, ObjectiveProgress]:
        with self._lock:
            return {
                name: ObjectiveProgress(p.status, p.start_t, p.finish_t)
                for name, p in self._objective_status.items()
            }

    def eta_to(self, vehicle_id: str, target: Union[str, Waypoint, tuple]) -> EtaResult:
        """ETA to an objective's first waypoint, along the remaining route.

        A bare waypoint target is estimated as a straight-line transit from
        the current position (it has no position on the planned route).
        """
        with self._lock:
            state = self.latest_state(vehicle_id)
            if isinstance(target, tuple):
                target = Waypoint(float(target[0]), float(target[1]))
            if isinstance(target, Waypoint):
                if state is None:
                    return EtaResult(kind="no_data", target_label=f"({target.x:g}, {target.y:g})")
                label = f"({target.x:g}, {target.y:g})"
                distance = math.hypot(target.x - state.x, target.y - state.y)
                return self._eta_from_distance(vehicle_id, state, distance, label)

            obj = self.plan.objective(target)
            status = self._objective_status[obj.name]
            if status.status is ObjectiveState.COMPLETED:
                return EtaResult(kind="completed", finish_t=status.finish_t, target_label=obj.name)
            if state is None:
                return EtaResult(kind="no_data", target_label=obj.name)
            route = self._route_for(vehicle_id)
            target_arc = route.arc_of_waypoint(obj.name, last=False)
            if target_arc is None:
                return EtaResult(
                    kind="unreachable", target_label=obj.name,
                    reason=f"{obj.name} is not on {vehicle_id}'s route",
                )
            distance = max(0.0, target_arc - route.arc_at(state.x, state.y))
            return self._eta_from_distance(vehicle_id, state, distance, obj.name)

    def etc_of(self, name: str) -> EtaResult:
        """Estimated time to complete an objective (through its last waypoint)."""
        with self._lock:
            obj = self.plan.objective(name)
            status = self._objective_status[obj.name]
            if status.status is ObjectiveState.COMPLETED:
                return EtaResult(kind="completed", finish_t=status.finish_t, target_label=obj.name)
            state = self.latest_state(obj.vehicle_id)
            if state is None:
                return EtaResult(kind="no_data", target_label=obj.name)
            route = self._route_for(obj.vehicle_id)
            target_arc = route.arc_of_waypoint(obj.name, last=True)
            if target_arc is None:
                return EtaResult(kind="unreachable", target_label=obj.name, reason="not on route")
            distance = max(0.0, target_arc - route.arc_at(state.x, state.y))
            result = self._eta_from_distance(obj.vehicle_id, state, distance, obj.name)
            if result.kind == "eta":
                result.kind = "etc"
            return result

    def _eta_from_distance(
        self, vehicle_id: str, state: VehicleState, distance: float, label: str
    ) -> EtaResult:
        speed = state.speed if state.speed > MIN_SPEED_FOR_ETA else self.plan.vehicle(vehicle_id).cruise_speed
        if speed <= 0:
            return EtaResult(kind="unreachable", target_label=label, reason="vehicle has no way to move")
        return EtaResult(
            kind="eta", seconds=distance / speed, distance_m=distance,
            speed_mps=speed, target_label=label,
        )

    def mission_progress(self) -> dict:
        """Mission-wide progress over planned path length, clamped to [0, 100]."""
        with self._lock:
            total = 0.0
            traversed = 0.0
            for v in self.plan.vehicles:
                route = self._route_for(v.vehicle_id)
                total += route.total
                series = self._states[v.vehicle_id]
                if series:
                    last = series[-1]
                    traversed += route.arc_at(last.x, last.y)
            pct = 100.0 * traversed / total if total > 0 else 0.0
            pct = min(100.0, max(0.0, pct))
            statuses = self.all_objective_status()
            completed = sum(1 for p in statuses.values() if p.status is ObjectiveState.COMPLETED)
            if statuses and completed == len(statuses):
                pct = 100.0
            return {
                "pct": pct,
                "completed": completed,
                "total": len(statuses),
                "total_path_m": total,
                "traversed_m": traversed,
                "per_objective": statuses,
            }

    def history(
        self,
        vehicle_id: Optional[str] = None,
        objective: Optional[str] = None,
        type: Optional[Union[EventType, str]] = None,
        since: Optional[float] = None,
    ) -> list[MissionEvent]:
        with self._lock:
            if isinstance(type, str):
                type = EventType(type)
            out = []
            for e in self._events:
                if vehicle_id is not None and e.vehicle_id.casefold() != vehicle_id.casefold():
                    continue
                if objective is not None and e.subject.casefold() != objective.casefold():
                    continue
                if type is not None and e.type is not type:
                    continue
                if since is not None and e.t < since:
                    continue
                out.append(e)
            out.sort(key=lambda e: e.t)
            return out

    def fault_summary(self, vehicle_id: str) -> list[FaultRecord]:
        with self._lock:
            if vehicle_id not in self._states:
                raise UnknownVehicleError(vehicle_id)
            records = [
                FaultRecord(
                    code=e.subject,
                    t=e.t,
                    detail=e.detail,
                    acknowledged=(vehicle_id.casefold(), e.subject.casefold()) in self._fault_acks,
                )
                for e in self._events
                if e.type is EventType.FAULT and e.vehicle_id.casefold() == vehicle_id.casefold()
            ]
            records.sort(key=lambda r: r.t)
            return records

    def acknowledge_fault(self, vehicle_id: str, code: str) -> None:
        with self._lock:
            self._fault_acks.add((vehicle_id.casefold(), code.casefold()))

    def current_time(self) -> float:
        """Largest timestamp seen on any stream (0 before any data)."""
        with self._lock:
            t = 0.0
            for series in self._states.values():
                if series:
                    t = max(t, series[-1].t)
            if self._events:
                t = max(t, self._events[-1].t)
            return t

    def total_path_length(self, vehicle_id: Optional[str] = None) -> float:
        with self._lock:
            if vehicle_id is not None:
                return self._route_for(vehicle_id).total
            return sum(self._route_for(v.vehicle_id).total for v in self.plan.vehicles)

    # -- internals ----------------------------------------------------------

    def _route_for(self, vehicle_id: str) -> Route:
        if self._routes_dirty:
            self._routes = {v.vehicle_id: self._build_route(v.vehicle_id) for v in self.plan.vehicles}
            self._routes_dirty = False
        return self._routes[self.plan.vehicle(vehicle_id).vehicle_id]

    def _build_route(self, vehicle_id: str) -> Route:
        points = [RoutePoint(VEHICLE_START, 0.0, None)]
        arc = 0.0
        for obj in self.plan.objectives_for(vehicle_id):
            for wp in obj.waypoints:
                arc += points[-1].waypoint.distance_to(wp)
                points.append(RoutePoint(wp, arc, obj.name))
        return Route(points)


def replay_journal(plan: MissionPlan, path: str) -> MissionStore:
    """Rebuild a store by replaying an append-only journal file."""
    from .plan import parse_stream_line

    store = MissionStore(plan)
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            record = parse_stream_line(line)
            if isinstance(record, MissionEvent):
                store.ingest_event(record)
            else:
                store.ingest_state(record)
    return store
