"""Construct a MissionRuntime from file paths and packaged defaults."""

from __future__ import annotations

from typing import Optional

from .. import defaults
from ..mission.plan import load_plan_file
from ..sim.scenario import Scenario, load_scenario_file
from .runtime import MissionRuntime


def build_runtime(
    plan_path: str,
    scenario_path: Optional[str] = None,
    rules_path: Optional[str] = None,
    templates_path: Optional[str] = None,
    static_lexicon_path: Optional[str] = None,
    policy_path: Optional[str] = None,
    journal_path: Optional[str] = None,
) -> MissionRuntime:
    plan = load_plan_file(plan_path)
    scenario = load_scenario_file(scenario_path, plan) if scenario_path else Scenario()
    return MissionRuntime(
        plan=plan,
        scenario=scenario,
        rules=defaults.load_rules(rules_path),
        templates=defaults.load_templates(templates_path),
        static_entries=defaults.load_static_entries(static_lexicon_path),
        policy=defaults.load_alert_policy(policy_path),
        journal_path=journal_path,
    )
