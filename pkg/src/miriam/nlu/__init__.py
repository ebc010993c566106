from .frames import (
    ANAPHORA,
    CLARIFY,
    ELLIPSIS,
    EXPLICIT,
    INTENTS,
    REQUIRED_SLOT_TYPES,
    UNKNOWN,
    DialogueContext,
    IntentFrame,
    Referent,
    Slot,
    clarification,
)
from .lexicon import LexEntry, Lexicon, parse_static_entries, type_compatible
from .matcher import Candidate, match_pattern, match_rules
from .parser import IntentParser, resolve_anaphora, resolve_ellipsis
from .rules import Rule, RuleSyntaxError, parse_rules, reserved_literals
from .text import match_duration, match_number, normalize, parse_number

__all__ = [
    "ANAPHORA",
    "CLARIFY",
    "Candidate",
    "DialogueContext",
    "ELLIPSIS",
    "EXPLICIT",
    "INTENTS",
    "IntentFrame",
    "IntentParser",
    "LexEntry",
    "Lexicon",
    "REQUIRED_SLOT_TYPES",
    "Referent",
    "Rule",
    "RuleSyntaxError",
    "Slot",
    "UNKNOWN",
    "clarification",
    "match_duration",
    "match_number",
    "match_pattern",
    "match_rules",
    "normalize",
    "parse_number",
    "parse_rules",
    "parse_static_entries",
    "reserved_literals",
    "resolve_anaphora",
    "resolve_ellipsis",
    "type_compatible",
]
