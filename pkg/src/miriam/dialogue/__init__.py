from .prefs import PreferenceError, Preferences
from .processor import (
    CLARIFYING_SHAPES,
    REPLY_SHAPES,
    DialogueProcessor,
    Reply,
    SessionState,
)
from .render import KNOTS_PER_MPS, fmt_duration, fmt_position, fmt_speed, fmt_time
from .templates import TemplateError, TemplateSet

__all__ = [
    "CLARIFYING_SHAPES",
    "DialogueProcessor",
    "KNOTS_PER_MPS",
    "PreferenceError",
    "Preferences",
    "REPLY_SHAPES",
    "Reply",
    "SessionState",
    "TemplateError",
    "TemplateSet",
    "fmt_duration",
    "fmt_position",
    "fmt_speed",
    "fmt_time",
]
