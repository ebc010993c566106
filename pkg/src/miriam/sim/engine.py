"""Deterministic autonomy stand-in: waypoint-following mission execution.

The simulator advances in fixed ticks.  Each tick it applies due script
triggers, moves every vehicle toward its current waypoint by at most
speed*dt, drains batteries, and emits telemetry and events.  Streams are a
pure function of (plan, scenario): with jitter disabled, two runs are
byte-identical.
"""

from __future__ import annotations

import copy
import json
import logging
import math
import random
from dataclasses import dataclass, field
from typing import IO, Optional, Union

from ..mission.plan import event_to_record, record_to_line, state_to_record
from ..mission.types import (
    EventType,
    Health,
    MissionEvent,
    MissionPlan,
    Objective,
    ObjectiveKind,
    VehicleState,
    Waypoint,
)
from .scenario import Scenario, Trigger

logger = logging.getLogger(__name__)

DEFAULT_T_MAX = 24 * 3600.0

# A fault halves locomotion; repeated faults never push the vehicle below
# this floor, so missions still terminate.
FAULT_SPEED_MULTIPLIER = 0.5
MIN_EFFECTIVE_SPEED = 0.1

Emission = Union[VehicleState, MissionEvent]


@dataclass
class VehicleRun:
    """Mutable execution state for one vehicle."""

    spec_id: str
    cruise_speed: float
    drain_rate: float
    objectives: list[Objective]
    x: float = 0.0
    y: float = 0.0
    heading: float = 0.0
    battery_pct: float = 100.0
    health: Health = Health.NOMINAL
    speed_factor: float = 1.0
    obj_idx: int = 0
    wp_idx: int = 0
    started_current: bool = False
    last_speed: float = 0.0
    warned_low_battery: bool = False
    warned_critical_battery: bool = False

    @property
    def done(self) -> bool:
        return self.obj_idx >= len(self.objectives)

    @property
    def current_objective(self) -> Optional[Objective]:
        return self.objectives[self.obj_idx] if not self.done else None

    def effective_speed(self) -> float:
        if self.speed_factor >= 1.0:
            return self.cruise_speed
        return max(MIN_EFFECTIVE_SPEED, self.cruise_speed * self.speed_factor)


@dataclass
class RunSummary:
    ticks: int = 0
    events: int = 0
    objectives_completed: int = 0


class Simulator:
    """Executes one mission plan under one scenario, tick by tick."""

    def __init__(self, plan: MissionPlan, scenario: Optional[Scenario] = None):
        scenario = scenario or Scenario()
        scenario.validate(plan)
        self.plan = copy.deepcopy(plan)
        self.scenario = scenario
        self.t = 0.0
        self.ticks = 0
        self.mission_complete = False
        self._bootstrapped = False
        self._script_cursor = 0
        self._detections = 0
        self._rng = random.Random(scenario.seed)
        self.vehicles = {
            v.vehicle_id: VehicleRun(
                spec_id=v.vehicle_id,
                cruise_speed=v.cruise_speed,
                drain_rate=v.battery_drain_rate,
                objectives=[o for o in self.plan.objectives if o.vehicle_id == v.vehicle_id],
            )
            for v in self.plan.vehicles
        }
        self._order = sorted(self.vehicles)

    # -- trigger application -------------------------------------------------

    def inject_fault(self, vehicle_id: str, code: str) -> list[MissionEvent]:
        v = self.vehicles[vehicle_id]
        v.health = Health.FAULT
        v.speed_factor *= FAULT_SPEED_MULTIPLIER
        return [
            MissionEvent(
                t=self.t,
                vehicle_id=vehicle_id,
                type=EventType.FAULT,
                subject=code,
                detail=f"speed reduced to {v.effective_speed():.2f} m/s",
            )
        ]

    def apply_obstacle(self, vehicle_id: str) -> list[MissionEvent]:
        """Insert a perpendicular-left detour around the current leg.

        Detour points sit 50 m left of the remaining segment at 1/3 and 2/3
        of its length.  With no active leg the detection is logged only.
        """
        v = self.vehicles[vehicle_id]
        obj = v.current_objective
        events = []
        if obj is None:
            logger.info("obstacle for %s ignored: no active leg", vehicle_id)
            return events
        # the current leg runs to the first waypoint ahead of the vehicle
        idx = v.wp_idx
        while idx < len(obj.waypoints) and math.hypot(
            obj.waypoints[idx].x - v.x, obj.waypoints[idx].y - v.y
        ) < 1e-9:
            idx += 1
        events.append(
            MissionEvent(
                t=self.t,
                vehicle_id=vehicle_id,
                type=EventType.OBSTACLE_DETECTED,
                subject=obj.name,
                detail=json.dumps({"at": [round(v.x, 3), round(v.y, 3)]}),
            )
        )
        if idx >= len(obj.waypoints):
            logger.info("obstacle for %s ignored: at waypoint, no remaining leg", vehicle_id)
            return events
        target = obj.waypoints[idx]
        dx, dy = target.x - v.x, target.y - v.y
        remaining = math.hypot(dx, dy)
        ux, uy = dx / remaining, dy / remaining
        # perpendicular-left of travel direction (x east, y north)
        px, py = -uy, ux
        d1 = Waypoint(v.x + dx / 3.0 + 50.0 * px, v.y + dy / 3.0 + 50.0 * py)
        d2 = Waypoint(v.x + 2.0 * dx / 3.0 + 50.0 * px, v.y + 2.0 * dy / 3.0 + 50.0 * py)
        obj.waypoints = obj.waypoints[:idx] + [d1, d2] + obj.waypoints[idx:]
        events.append(
            MissionEvent(
                t=self.t,
                vehicle_id=vehicle_id,
                type=EventType.OBJECTIVE_CHANGED,
                subject=obj.name,
                detail=json.dumps({"waypoints": [[w.x, w.y] for w in obj.waypoints]}),
            )
        )
        return events

    def apply_target(self, vehicle_id: str, x: float, y: float) -> list[MissionEvent]:
        """Append an inspect objective for a detected object of interest."""
        if self.mission_complete:
            logger.info("target detection for %s ignored: mission already complete", vehicle_id)
            return []
        v = self.vehicles[vehicle_id]
        self._detections += 1
        name = f"Inspect{self._detections}"
        depth = v.objectives[-1].depth if v.objectives else 0.0
        obj = Objective(
            name=name,
            kind=ObjectiveKind.INSPECT,
            vehicle_id=vehicle_id,
            waypoints=[Waypoint(x, y)],
            depth=depth,
        )
        was_done = v.done
        v.objectives.append(obj)
        self.plan.objectives.append(obj)
        if was_done:
            v.started_current = False
            v.wp_idx = 0
        detail = {
            "append": True,
            "kind": "inspect",
            "vehicle_id": vehicle_id,
            "depth": depth,
            "waypoints": [[x, y]],
        }
        return [
            MissionEvent(
                t=self.t, vehicle_id=vehicle_id, type=EventType.TARGET_DETECTED,
                subject=name, detail=json.dumps({"x": x, "y": y}),
            ),
            MissionEvent(
                t=self.t, vehicle_id=vehicle_id, type=EventType.OBJECTIVE_CHANGED,
                subject=name, detail=json.dumps(detail),
            ),
        ]

    def _apply_trigger(self, trig: Trigger) -> list[MissionEvent]:
        if trig.kind == "fault":
            return self.inject_fault(trig.vehicle, trig.code)
        if trig.kind == "obstacle":
            return self.apply_obstacle(trig.vehicle)
        return self.apply_target(trig.vehicle, trig.x, trig.y)

    # -- stepping -------------------------------------------------------------

    def _bootstrap(self) -> list[Emission]:
        """Initial objective_started events and t=0 telemetry."""
        out: list[Emission] = []
        for vid in self._order:
            v = self.vehicles[vid]
            obj = v.current_objective
            if obj is not None and not v.started_current:
                v.started_current = True
                out.append(
                    MissionEvent(
                        t=0.0, vehicle_id=vid,
                        type=EventType.OBJECTIVE_STARTED, subject=obj.name,
                    )
                )
        out.extend(self._telemetry(0.0))
        return out

    def _telemetry(self, t: float) -> list[VehicleState]:
        return [
            VehicleState(
                t=t,
                vehicle_id=vid,
                x=self.vehicles[vid].x,
                y=self.vehicles[vid].y,
                depth=(
                    self.vehicles[vid].current_objective.depth
                    if self.vehicles[vid].current_objective
                    else 0.0
                ),
                heading=self.vehicles[vid].heading,
                speed=self.vehicles[vid].last_speed,
                battery_pct=self.vehicles[vid].battery_pct,
                active_objective=(
                    self.vehicles[vid].current_objective.name
                    if self.vehicles[vid].current_objective
                    else None
                ),
                health=self.vehicles[vid].health,
            )
            for vid in self._order
        ]

    def _move_vehicle(
        self, v: VehicleRun, vid: str, dt: float, t_next: float, out: list[Emission]
    ) -> None:
        """Advance toward the current waypoint by at most speed*dt.

        Arrival at a waypoint ends the tick's movement (leftover budget is
        discarded); zero-length legs (already standing on the waypoint) are
        skipped without consuming the tick.
        """
        speed = v.effective_speed()
        if self.scenario.jitter_pct > 0:
            speed *= 1.0 + self._rng.uniform(-1.0, 1.0) * self.scenario.jitter_pct / 100.0
        budget = speed * dt
        v.last_speed = 0.0
        now_t = self.t
        while not v.done:
            obj = v.current_objective
            if not v.started_current:
                v.started_current = True
                out.append(
                    MissionEvent(
                        t=now_t, vehicle_id=vid,
                        type=EventType.OBJECTIVE_STARTED, subject=obj.name,
                    )
                )
            target = obj.waypoints[v.wp_idx]
            dx, dy = target.x - v.x, target.y - v.y
            dist = math.hypot(dx, dy)
            if dist > 1e-12:
                v.heading = math.degrees(math.atan2(dx, dy)) % 360.0
            if dist > budget:
                v.x += budget * dx / dist
                v.y += budget * dy / dist
                v.last_speed = speed
                return
            v.x, v.y = target.x, target.y
            v.wp_idx += 1
            now_t = t_next
            if v.wp_idx >= len(obj.waypoints):
                out.append(
                    MissionEvent(
                        t=t_next, vehicle_id=vid,
                        type=EventType.OBJECTIVE_COMPLETED, subject=obj.name,
                    )
                )
                v.obj_idx += 1
                v.wp_idx = 0
                v.started_current = False
            if dist > 1e-12:
                # a real arrival consumes the rest of the tick
                v.last_speed = dist / dt
                return

    def _drain_battery(self, v: VehicleRun, vid: str, t_next: float, out: list[Emission]) -> None:
        v.battery_pct = max(0.0, 100.0 - v.drain_rate * t_next)
        if not v.warned_low_battery and v.battery_pct <= self.scenario.battery_warning_pct:
            v.warned_low_battery = True
            out.append(
                MissionEvent(
                    t=t_next, vehicle_id=vid, type=EventType.BATTERY_WARNING,
                    subject=f"{self.scenario.battery_warning_pct:g}%",
                    detail=f"battery at {v.battery_pct:.1f}%",
                )
            )
        if not v.warned_critical_battery and v.battery_pct <= self.scenario.battery_critical_pct:
            v.warned_critical_battery = True
            out.append(
                MissionEvent(
                    t=t_next, vehicle_id=vid, type=EventType.BATTERY_CRITICAL,
                    subject=f"{self.scenario.battery_critical_pct:g}%",
                    detail=f"battery at {v.battery_pct:.1f}%",
                )
            )

    def step(self) -> list[Emission]:
        """Advance one tick; returns the tick's emissions in order."""
        out: list[Emission] = []
        if not self._bootstrapped:
            self._bootstrapped = True
            out.extend(self._bootstrap())
        if self.mission_complete:
            return out

        dt = self.scenario.tick_dt
        while (
            self._script_cursor < len(self.scenario.script)
            and self.scenario.script[self._script_cursor].t <= self.t
        ):
            out.extend(self._apply_trigger(self.scenario.script[self._script_cursor]))
            self._script_cursor += 1

        t_next = self.t + dt
        for vid in self._order:
            v = self.vehicles[vid]
            if not v.done:
                self._move_vehicle(v, vid, dt, t_next, out)
            else:
                v.last_speed = 0.0
            self._drain_battery(v, vid, t_next, out)

        self.t = t_next
        self.ticks += 1
        if self.ticks % self.scenario.telemetry_every == 0:
            out.extend(self._telemetry(self.t))
        if all(self.vehicles[vid].done for vid in self._order):
            self.mission_complete = True
            out.append(
                MissionEvent(
                    t=self.t, vehicle_id="", type=EventType.MISSION_COMPLETED,
                    subject=self.plan.plan_id,
                )
            )
        return out


def run(
    plan: MissionPlan,
    scenario: Optional[Scenario] = None,
    sink: Optional[IO[str]] = None,
    t_max: float = DEFAULT_T_MAX,
) -> RunSummary:
    """Run a mission to completion (or t_max), streaming NDJSON to sink."""
    sim = Simulator(plan, scenario)
    summary = RunSummary()
    while not sim.mission_complete and sim.t < t_max:
        for emission in sim.step():
            if isinstance(emission, MissionEvent):
                summary.events += 1
                if emission.type is EventType.OBJECTIVE_COMPLETED:
                    summary.objectives_completed += 1
                record = event_to_record(emission)
            else:
                record = state_to_record(emission)
            if sink is not None:
                sink.write(record_to_line(record) + "\n")
        summary.ticks = sim.ticks
    return summary
