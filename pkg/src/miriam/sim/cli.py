"""Standalone simulator CLI: `sim run --plan P --scenario S [--out FILE|-]`."""

from __future__ import annotations

import sys

import click

from ..mission.plan import load_plan_file
from .engine import DEFAULT_T_MAX, run
from .scenario import Scenario, load_scenario_file


@click.group()
def main():
    """Mission autonomy simulator."""


@main.command("run")
@click.option("--plan", "plan_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--scenario", "scenario_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", default="-", show_default=True,
              help="NDJSON stream destination; '-' for stdout.")
@click.option("--t-max", default=DEFAULT_T_MAX, show_default=True, type=float,
              help="Stop after this many simulated seconds.")
def run_cmd(plan_path: str, scenario_path: str, out_path: str, t_max: float):
    """Execute the plan and stream telemetry/events as NDJSON."""
    plan = load_plan_file(plan_path)
    scenario = load_scenario_file(scenario_path, plan) if scenario_path else Scenario()
    if out_path == "-":
        summary = run(plan, scenario, sink=sys.stdout, t_max=t_max)
    else:
        with open(out_path, "w", encoding="utf-8") as sink:
            summary = run(plan, scenario, sink=sink, t_max=t_max)
    click.echo(
        f"ticks={summary.ticks} events={summary.events} "
        f"objectives_completed={summary.objectives_completed}",
        err=True,
    )


if __name__ == "__main__":
    main()
