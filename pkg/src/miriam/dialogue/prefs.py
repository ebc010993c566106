"""Per-session user preferences."""

from __future__ import annotations

from dataclasses import dataclass

VALID = {
    "time_format": ("24h", "12h"),
    "units": ("metric", "nautical"),
    "alert_min_severity": ("info", "warning", "critical"),
}


class PreferenceError(ValueError):
    pass


@dataclass
class Preferences:
    time_format: str = "24h"
    units: str = "metric"
    alert_min_severity: str = "info"

    def set(self, key: str, value: str) -> None:
        if key not in VALID:
            raise PreferenceError(f"unknown preference {key!r}; valid keys: {', '.join(VALID)}")
        if value not in VALID[key]:
            raise PreferenceError(
                f"invalid {key} value {value!r}; valid: {', '.join(VALID[key])}"
            )
        setattr(self, key, value)
