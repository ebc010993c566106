"""Plan document and stream record codecs.

Plan files are UTF-8 JSON:

    {"plan_id": ..., "origin": {"lat":..., "lon":...},
     "vehicles": [{"id":..., "cruise_speed":..., "battery_drain_rate":...}],
     "objectives": [{"name":..., "kind":..., "vehicle":..., "depth":...,
                     "waypoints": [[x, y], ...]}]}

Telemetry and event streams are newline-delimited JSON, one record per
line, using the VehicleState / MissionEvent field names.
"""

from __future__ import annotations

import json
from typing import Union

from .types import (
    EventType,
    Health,
    MissionEvent,
    MissionPlan,
    Objective,
    ObjectiveKind,
    PlanValidationError,
    VehicleSpec,
    VehicleState,
    Waypoint,
)


class PlanSyntaxError(PlanValidationError):
    """Plan document is not well-formed JSON (position-reported)."""


def load_plan(document: str) -> MissionPlan:
    """Parse and validate a plan JSON document."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as e:
        raise PlanSyntaxError(f"plan is not valid JSON: {e.msg} (line {e.lineno} column {e.colno})") from e
    if not isinstance(doc, dict):
        raise PlanValidationError("plan document must be a JSON object")
    try:
        origin = doc.get("origin", {})
        vehicles = [
            VehicleSpec(
                vehicle_id=str(v["id"]),
                cruise_speed=float(v["cruise_speed"]),
                battery_drain_rate=float(v.get("battery_drain_rate", 0.0)),
            )
            for v in doc.get("vehicles", [])
        ]
        objectives = [
            Objective(
                name=str(o["name"]),
                kind=ObjectiveKind(str(o.get("kind", "survey"))),
                vehicle_id=str(o["vehicle"]),
                depth=float(o.get("depth", 0.0)),
                waypoints=[Waypoint(float(w[0]), float(w[1])) for w in o.get("waypoints", [])],
            )
            for o in doc.get("objectives", [])
        ]
        plan = MissionPlan(
            plan_id=str(doc.get("plan_id", "")),
            origin_lat=float(origin.get("lat", 0.0)),
            origin_lon=float(origin.get("lon", 0.0)),
            vehicles=vehicles,
            objectives=objectives,
        )
    except PlanValidationError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise PlanValidationError(f"malformed plan document: {e}") from e
    plan.validate()
    return plan


def load_plan_file(path: str) -> MissionPlan:
    with open(path, encoding="utf-8") as f:
        return load_plan(f.read())


def plan_to_doc(plan: MissionPlan) -> dict:
    """Serialize a plan back to the file schema (current geometry)."""
    return {
        "plan_id": plan.plan_id,
        "origin": {"lat": plan.origin_lat, "lon": plan.origin_lon},
        "vehicles": [
            {
                "id": v.vehicle_id,
                "cruise_speed": v.cruise_speed,
                "battery_drain_rate": v.battery_drain_rate,
            }
            for v in plan.vehicles
        ],
        "objectives": [
            {
                "name": o.name,
                "kind": o.kind.value,
                "vehicle": o.vehicle_id,
                "depth": o.depth,
                "waypoints": [[w.x, w.y] for w in o.waypoints],
            }
            for o in plan.objectives
        ],
    }


def state_to_record(s: VehicleState) -> dict:
    return {
        "t": s.t,
        "vehicle_id": s.vehicle_id,
        "x": s.x,
        "y": s.y,
        "depth": s.depth,
        "heading": s.heading,
        "speed": s.speed,
        "battery_pct": s.battery_pct,
        "active_objective": s.active_objective,
        "health": s.health.value,
    }


def event_to_record(e: MissionEvent) -> dict:
    return {
        "t": e.t,
        "vehicle_id": e.vehicle_id,
        "type": e.type.value,
        "subject": e.subject,
        "detail": e.detail,
    }


def record_to_line(record: dict) -> str:
    return json.dumps(record, separators=(",", ":"))


def parse_stream_line(line: str) -> Union[VehicleState, MissionEvent]:
    """Decode one NDJSON stream record.

    Event records carry a "type" field; everything else is telemetry.
    """
    obj = json.loads(line)
    if "type" in obj:
        return MissionEvent(
            t=float(obj["t"]),
            vehicle_id=str(obj.get("vehicle_id", "")),
            type=EventType(obj["type"]),
            subject=str(obj.get("subject", "")),
            detail=str(obj.get("detail", "")),
        )
    return VehicleState(
        t=float(obj["t"]),
        vehicle_id=str(obj["vehicle_id"]),
        x=float(obj["x"]),
        y=float(obj["y"]),
        depth=float(obj.get("depth", 0.0)),
        heading=float(obj.get("heading", 0.0)),
        speed=float(obj.get("speed", 0.0)),
        battery_pct=float(obj.get("battery_pct", 100.0)),
        active_objective=obj.get("active_objective"),
        health=Health(obj.get("health", "nominal")),
    )
