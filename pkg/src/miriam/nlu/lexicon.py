"""Entity lexicon: static config entries plus names taken from the plan.

The dynamic part is rebuilt from the loaded mission plan, so any vehicle
or objective name becomes matchable without touching config.  Surface
forms are normalized with the same tokenizer as utterances, which makes
multi-token names match as contiguous token spans.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass
from typing import Iterable, Optional

from ..mission.types import MissionPlan
from .text import normalize

logger = logging.getLogger(__name__)

ENTITY_TYPES = ("vehicle", "objective", "location")


@dataclass(frozen=True)
class LexEntry:
    canonical: str
    type: str


def type_compatible(entity_type: str, slot_type: str) -> bool:
    """Objectives are named places, so they satisfy location slots too."""
    if entity_type == slot_type:
        return True
    return slot_type == "location" and entity_type == "objective"


class Lexicon:
    def __init__(self, entries: dict[str, LexEntry]):
        self.entries = entries
        self.max_span = max((len(k.split()) for k in entries), default=1)

    @classmethod
    def build(
        cls,
        plan: MissionPlan,
        static_entries: Iterable[tuple[str, str, str]] = (),
        reserved_tokens: frozenset[str] = frozenset(),
    ) -> "Lexicon":
        entries: dict[str, LexEntry] = {}

        def add(surface: str, canonical: str, typ: str) -> None:
            key = " ".join(normalize(surface))
            if not key:
                return
            if key in reserved_tokens:
                logger.warning(
                    "lexicon entry %r collides with a rule keyword; dynamic entry wins", key
                )
            entries[key] = LexEntry(canonical, typ)

        for surface, canonical, typ in static_entries:
            if typ not in ENTITY_TYPES:
                raise ValueError(f"unknown lexicon entry type: {typ!r}")
            add(surface, canonical, typ)
        for v in plan.vehicles:
            add(v.vehicle_id, v.vehicle_id, "vehicle")
        for o in plan.objectives:
            add(o.name, o.name, "objective")
        return cls(entries)

    def lookup(self, surface: str) -> Optional[LexEntry]:
        return self.entries.get(" ".join(normalize(surface)))

    def match_span(
        self, tokens: list[str], start: int, slot_type: str
    ) -> Optional[tuple[int, LexEntry]]:
        """Longest lexicon span at `start` compatible with `slot_type`."""
        limit = min(self.max_span, len(tokens) - start)
        for length in range(limit, 0, -1):
            entry = self.entries.get(" ".join(tokens[start:start + length]))
            if entry is not None and type_compatible(entry.type, slot_type):
                return length, entry
        return None

    def __len__(self) -> int:
        return len(self.entries)


def parse_static_entries(text: str) -> list[tuple[str, str, str]]:
    """Parse `surface, canonical, type` CSV lines; `#` lines are comments."""
    rows = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        for row in csv.reader(io.StringIO(stripped)):
            if len(row) != 3:
                raise ValueError(f"bad lexicon line (need 3 fields): {line!r}")
            rows.append((row[0].strip(), row[1].strip(), row[2].strip()))
    return rows
