"""`miriam` command line: serve the chat service, or chat locally (repl)."""

from __future__ import annotations

import logging

import click
import uvicorn

from .service.app import create_app, mount_ui
from .service.build import build_runtime
from .service.repl import run_repl
from .sim.cli import main as sim_cli


def _common_options(f):
    f = click.option("--plan", "plan_path", required=True,
                     type=click.Path(exists=True, dir_okay=False))(f)
    f = click.option("--scenario", "scenario_path",
                     type=click.Path(exists=True, dir_okay=False))(f)
    f = click.option("--rules", "rules_path", type=click.Path(exists=True, dir_okay=False),
                     help="Rules file (or set MIRIAM_RULES).")(f)
    f = click.option("--templates", "templates_path", type=click.Path(exists=True, dir_okay=False),
                     help="Templates file (or set MIRIAM_TEMPLATES).")(f)
    f = click.option("--policy", "policy_path", type=click.Path(exists=True, dir_okay=False))(f)
    f = click.option("--static-lexicon", "static_lexicon_path",
                     type=click.Path(exists=True, dir_okay=False))(f)
    f = click.option("--speed", default=1.0, show_default=True, type=float,
                     help="Sim-seconds per wall second; 0 pauses the mission.")(f)
    f = click.option("--prerun", default=0.0, show_default=True, type=float,
                     help="Advance the mission this many sim-seconds before starting.")(f)
    f = click.option("--journal", "journal_path", type=click.Path(dir_okay=False),
                     help="Append ingested records to this NDJSON journal.")(f)
    return f


@click.group()
def main():
    """Chat-based mission assistant for simulated underwater vehicles."""
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")


@main.command()
@_common_options
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--ui", "ui_dir", type=click.Path(file_okay=False),
              help="Serve this directory as the web console at /.")
def serve(plan_path, scenario_path, rules_path, templates_path, policy_path,
          static_lexicon_path, speed, prerun, journal_path, host, port, ui_dir):
    """Run the HTTP chat service (REST + event stream)."""
    runtime = build_runtime(
        plan_path, scenario_path, rules_path, templates_path,
        static_lexicon_path, policy_path, journal_path,
    )
    runtime.advance_seconds(prerun)
    runtime.start_ticker(speed)
    app = create_app(runtime)
    if ui_dir:
        mount_ui(app, ui_dir)
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    finally:
        runtime.stop()


@main.command()
@_common_options
def repl(plan_path, scenario_path, rules_path, templates_path, policy_path,
         static_lexicon_path, speed, prerun, journal_path):
    """Chat with the mission on stdin/stdout, simulator in-process."""
    runtime = build_runtime(
        plan_path, scenario_path, rules_path, templates_path,
        static_lexicon_path, policy_path, journal_path,
    )
    runtime.advance_seconds(prerun)
    run_repl(runtime, speed=speed)


main.add_command(sim_cli, name="sim")


if __name__ == "__main__":
    main()
