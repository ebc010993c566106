"""Value formatting for replies: mission times, durations, speeds."""

from __future__ import annotations

from .prefs import Preferences

# 1 m/s in knots: 3600 s/h over 1852 m/nmi.
KNOTS_PER_MPS = 3600.0 / 1852.0


def fmt_time(t: float, prefs: Preferences) -> str:
    """Render mission-relative seconds as a clock time."""
    total = int(round(t))
    h, rem = divmod(total, 3600)
    m, s = divmod(rem, 60)
    if prefs.time_format == "12h":
        h24 = h % 24
        suffix = "AM" if h24 < 12 else "PM"
        h12 = h24 % 12 or 12
        return f"{h12}:{m:02d}:{s:02d} {suffix}"
    return f"{h:02d}:{m:02d}:{s:02d}"


def fmt_duration(seconds: float) -> str:
    total = int(round(seconds))
    if total < 60:
        return f"{total} s"
    h, rem = divmod(total, 3600)
    m, s = divmod(rem, 60)
    parts = []
    if h:
        parts.append(f"{h} h")
    if m:
        parts.append(f"{m} min")
    if s:
        parts.append(f"{s} s")
    return " ".join(parts)


def fmt_speed(mps: float, prefs: Preferences) -> str:
    if prefs.units == "nautical":
        return f"{mps * KNOTS_PER_MPS:.1f} kn"
    return f"{mps:.1f} m/s"


def fmt_position(x: float, y: float) -> str:
    return f"({x:.0f} m E, {y:.0f} m N)"
