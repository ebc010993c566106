import json
from importlib import resources

import pytest

from miriam.mission.plan import load_plan
from miriam.mission.store import MissionStore
from miriam.mission.types import (
    MissionPlan,
    Objective,
    ObjectiveKind,
    VehicleSpec,
    Waypoint,
)


def demo_plan_text() -> str:
    return (resources.files("miriam") / "demo" / "plan.json").read_text(encoding="utf-8")


def demo_scenario_text() -> str:
    return (resources.files("miriam") / "demo" / "scenario.json").read_text(encoding="utf-8")


@pytest.fixture
def demo_plan() -> MissionPlan:
    return load_plan(demo_plan_text())


@pytest.fixture
def demo_plan_doc() -> dict:
    return json.loads(demo_plan_text())


def make_plan(objectives=None, vehicles=None, plan_id="p1") -> MissionPlan:
    """Small hand-built plan; defaults to one vehicle, one straight leg."""
    if vehicles is None:
        vehicles = [VehicleSpec("auv1", cruise_speed=1.5, battery_drain_rate=0.0)]
    if objectives is None:
        objectives = [
            Objective(
                "Survey0", ObjectiveKind.SURVEY, "auv1",
                [Waypoint(0, 0), Waypoint(600, 0)], depth=10.0,
            )
        ]
    plan = MissionPlan(
        plan_id=plan_id, origin_lat=56.0, origin_lon=-3.0,
        vehicles=vehicles, objectives=objectives,
    )
    plan.validate()
    return plan


@pytest.fixture
def straight_store() -> MissionStore:
    return MissionStore(make_plan())
