"""Scenario files: deterministic scripts of environmental triggers.

JSON schema:

    {"seed": 7, "tick_dt": 1.0, "telemetry_every": 5, "jitter_pct": 0.0,
     "battery_warning_pct": 30.0, "battery_critical_pct": 15.0,
     "script": [{"t": 200, "trigger": "fault", "vehicle": "auv1", "code": "THRUSTER_1"},
                {"t": 400, "trigger": "obstacle", "vehicle": "auv1"},
                {"t": 900, "trigger": "target", "vehicle": "auv1", "x": 50, "y": 80}]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from ..mission.types import MissionPlan

TRIGGER_KINDS = ("fault", "obstacle", "target")


class ScenarioError(ValueError):
    """Scenario document is malformed or references unknown entities."""


@dataclass
class Trigger:
    t: float
    kind: str
    vehicle: str
    code: str = ""
    x: float = 0.0
    y: float = 0.0


@dataclass
class Scenario:
    seed: int = 0
    tick_dt: float = 1.0
    telemetry_every: int = 5
    jitter_pct: float = 0.0
    battery_warning_pct: float = 30.0
    battery_critical_pct: float = 15.0
    script: list[Trigger] = field(default_factory=list)

    def validate(self, plan: Optional[MissionPlan] = None) -> None:
        if self.tick_dt <= 0:
            raise ScenarioError("tick_dt must be > 0")
        if self.telemetry_every < 1:
            raise ScenarioError("telemetry_every must be >= 1")
        if self.battery_critical_pct >= self.battery_warning_pct:
            raise ScenarioError("battery_critical_pct must be < battery_warning_pct")
        last_t = -float("inf")
        known = {v.vehicle_id for v in plan.vehicles} if plan else None
        for trig in self.script:
            if trig.kind not in TRIGGER_KINDS:
                raise ScenarioError(f"unknown trigger kind: {trig.kind!r}")
            if trig.t < last_t:
                raise ScenarioError("script times must be non-decreasing")
            last_t = trig.t
            if trig.kind == "fault" and not trig.code:
                raise ScenarioError("fault trigger requires a code")
            if known is not None and trig.vehicle not in known:
                raise ScenarioError(f"trigger references unknown vehicle {trig.vehicle!r}")


def load_scenario(document: str, plan: Optional[MissionPlan] = None) -> Scenario:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"scenario is not valid JSON: {e}") from e
    script = [
        Trigger(
            t=float(s["t"]),
            kind=str(s["trigger"]),
            vehicle=str(s.get("vehicle", "")),
            code=str(s.get("code", "")),
            x=float(s.get("x", 0.0)),
            y=float(s.get("y", 0.0)),
        )
        for s in doc.get("script", [])
    ]
    scenario = Scenario(
        seed=int(doc.get("seed", 0)),
        tick_dt=float(doc.get("tick_dt", 1.0)),
        telemetry_every=int(doc.get("telemetry_every", 5)),
        jitter_pct=float(doc.get("jitter_pct", 0.0)),
        battery_warning_pct=float(doc.get("battery_warning_pct", 30.0)),
        battery_critical_pct=float(doc.get("battery_critical_pct", 15.0)),
        script=script,
    )
    scenario.validate(plan)
    return scenario


def load_scenario_file(path: str, plan: Optional[MissionPlan] = None) -> Scenario:
    with open(path, encoding="utf-8") as f:
        return load_scenario(f.read(), plan)
