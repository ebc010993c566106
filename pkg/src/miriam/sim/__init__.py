from .engine import DEFAULT_T_MAX, RunSummary, Simulator, run
from .scenario import Scenario, ScenarioError, Trigger, load_scenario, load_scenario_file

__all__ = [
    "DEFAULT_T_MAX",
    "RunSummary",
    "Scenario",
    "ScenarioError",
    "Simulator",
    "Trigger",
    "load_scenario",
    "load_scenario_file",
    "run",
]
