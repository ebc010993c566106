"""Packaged default config and demo assets, with env-var overrides.

MIRIAM_RULES and MIRIAM_TEMPLATES point at replacement files when set.
"""

from __future__ import annotations

import os
from importlib import resources
from typing import Optional

from .alerts.engine import AlertPolicy, load_policy
from .dialogue.templates import TemplateSet
from .nlu.lexicon import parse_static_entries
from .nlu.rules import Rule, parse_rules

RULES_ENV = "MIRIAM_RULES"
TEMPLATES_ENV = "MIRIAM_TEMPLATES"


def _config_text(name: str) -> str:
    return (resources.files("miriam") / "config" / name).read_text(encoding="utf-8")


def _resolve(name: str, path: Optional[str], env: Optional[str]) -> str:
    if path:
        with open(path, encoding="utf-8") as f:
            return f.read()
    if env and os.environ.get(env):
        with open(os.environ[env], encoding="utf-8") as f:
            return f.read()
    return _config_text(name)


def load_rules(path: Optional[str] = None) -> list[Rule]:
    return parse_rules(_resolve("rules.txt", path, RULES_ENV))


def load_templates(path: Optional[str] = None) -> TemplateSet:
    return TemplateSet.parse(_resolve("templates.txt", path, TEMPLATES_ENV))


def load_static_entries(path: Optional[str] = None) -> list[tuple[str, str, str]]:
    return parse_static_entries(_resolve("static_lexicon.csv", path, None))


def load_alert_policy(path: Optional[str] = None) -> AlertPolicy:
    return load_policy(_resolve("policy.json", path, None))


def demo_plan_text() -> str:
    return (resources.files("miriam") / "demo" / "plan.json").read_text(encoding="utf-8")


def demo_scenario_text() -> str:
    return (resources.files("miriam") / "demo" / "scenario.json").read_text(encoding="utf-8")


def corpus_text() -> str:
    return _config_text("corpus.tsv")
