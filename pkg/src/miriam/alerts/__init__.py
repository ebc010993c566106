from .engine import (
    Alert,
    AlertEngine,
    AlertPolicy,
    EventOutcome,
    PolicyError,
    Reminder,
    SEVERITIES,
    alert_text,
    classify,
    load_policy,
)

__all__ = [
    "Alert",
    "AlertEngine",
    "AlertPolicy",
    "EventOutcome",
    "PolicyError",
    "Reminder",
    "SEVERITIES",
    "alert_text",
    "classify",
    "load_policy",
]
