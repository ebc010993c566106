import json

import pytest

from miriam.mission.plan import PlanSyntaxError, load_plan, parse_stream_line, plan_to_doc
from miriam.mission.types import (
    EventType,
    MissionEvent,
    PlanValidationError,
    VehicleState,
)

from conftest import demo_plan_text


def test_load_demo_plan():
    plan = load_plan(demo_plan_text())
    assert plan.plan_id == "demo-0001"
    assert [v.vehicle_id for v in plan.vehicles] == ["auv1"]
    assert [o.name for o in plan.objectives] == ["Survey0", "Survey1"]


def test_load_plan_reports_syntax_position():
    with pytest.raises(PlanSyntaxError) as err:
        load_plan('{"plan_id": "x", }')
    assert "line" in str(err.value) and "column" in str(err.value)


def test_zero_objectives_rejected(demo_plan_doc):
    demo_plan_doc["objectives"] = []
    with pytest.raises(PlanValidationError, match="no objectives"):
        load_plan(json.dumps(demo_plan_doc))


def test_duplicate_objective_name_case_insensitive(demo_plan_doc):
    demo_plan_doc["objectives"][1]["name"] = "survey0"
    with pytest.raises(PlanValidationError, match="duplicate objective name"):
        load_plan(json.dumps(demo_plan_doc))


def test_unknown_vehicle_in_objective(demo_plan_doc):
    demo_plan_doc["objectives"][0]["vehicle"] = "auv9"
    with pytest.raises(PlanValidationError, match="unknown vehicle_id"):
        load_plan(json.dumps(demo_plan_doc))


def test_empty_waypoints_rejected(demo_plan_doc):
    demo_plan_doc["objectives"][0]["waypoints"] = []
    with pytest.raises(PlanValidationError, match="empty waypoints"):
        load_plan(json.dumps(demo_plan_doc))


def test_consecutive_identical_waypoints_rejected(demo_plan_doc):
    demo_plan_doc["objectives"][0]["waypoints"] = [[0, 0], [0, 0], [10, 0]]
    with pytest.raises(PlanValidationError, match="identical"):
        load_plan(json.dumps(demo_plan_doc))


def test_plan_roundtrip(demo_plan_doc):
    plan = load_plan(json.dumps(demo_plan_doc))
    doc = plan_to_doc(plan)
    assert doc["plan_id"] == demo_plan_doc["plan_id"]
    assert doc["objectives"][0]["waypoints"] == demo_plan_doc["objectives"][0]["waypoints"]


def test_stream_line_roundtrip():
    state_line = json.dumps(
        {"t": 5.0, "vehicle_id": "auv1", "x": 1.0, "y": 2.0, "depth": 3.0,
         "heading": 90.0, "speed": 1.5, "battery_pct": 99.0,
         "active_objective": "Survey0", "health": "nominal"}
    )
    record = parse_stream_line(state_line)
    assert isinstance(record, VehicleState)
    assert record.active_objective == "Survey0"

    event_line = json.dumps(
        {"t": 7.0, "vehicle_id": "auv1", "type": "fault",
         "subject": "THRUSTER_1", "detail": ""}
    )
    record = parse_stream_line(event_line)
    assert isinstance(record, MissionEvent)
    assert record.type is EventType.FAULT
