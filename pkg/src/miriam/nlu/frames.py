"""Intent frames and per-session dialogue context."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .lexicon import type_compatible

# Control intents produced by the parser itself.
UNKNOWN = "unknown"
CLARIFY = "clarify"

# Slot sources.
EXPLICIT = "explicit"
ANAPHORA = "anaphora"
ELLIPSIS = "ellipsis"

INTENTS = (
    "vehicle_status",
    "vehicle_location",
    "plan_summary",
    "current_objective",
    "eta_location",
    "etc_objective",
    "objective_location",
    "objective_finish_time",
    "past_activities",
    "progress",
    "fault_diagnosis",
    "create_reminder",
    "set_preference",
    "acknowledge_alert",
    "help",
    UNKNOWN,
)

# Slot types an intent cannot answer without.
REQUIRED_SLOT_TYPES = {
    "vehicle_status": ("vehicle",),
    "vehicle_location": ("vehicle",),
    "eta_location": ("location",),
    "etc_objective": ("objective",),
    "objective_location": ("objective",),
    "objective_finish_time": ("objective",),
}


@dataclass
class Slot:
    name: str
    value: Union[str, float]
    type: str
    source: str = EXPLICIT
    span: tuple[int, int] = (0, 0)


@dataclass
class IntentFrame:
    intent: str
    slots: dict[str, Slot] = field(default_factory=dict)
    confidence: int = 0
    raw: str = ""
    missing: Optional[str] = None  # slot type wanted, on clarification frames
    note: str = ""                 # free-text tail captured by a wildcard

    @property
    def is_clarification(self) -> bool:
        return self.intent == CLARIFY

    def slot_of_type(self, slot_type: str) -> Optional[Slot]:
        for slot in self.slots.values():
            if slot.type == slot_type:
                return slot
        return None

    def entity_slots(self) -> list[Slot]:
        return [s for s in self.slots.values() if s.type in ("vehicle", "objective", "location")]


def clarification(raw: str, missing: Optional[str] = None) -> IntentFrame:
    return IntentFrame(intent=CLARIFY, raw=raw, missing=missing)


@dataclass
class Referent:
    entity: str
    type: str
    turn: int


class DialogueContext:
    """Referent stack and recent frames for one chat session."""

    MAX_REFERENTS = 20
    MAX_FRAMES = 20

    def __init__(self):
        self._referents: list[Referent] = []  # newest last
        self.last_frame: Optional[IntentFrame] = None
        self._frames: list[IntentFrame] = []  # newest last
        self.turn = 0

    def push(self, entity: str, entity_type: str) -> None:
        self._referents = [
            r for r in self._referents
            if not (r.entity == entity and r.type == entity_type)
        ]
        self._referents.append(Referent(entity, entity_type, self.turn))
        if len(self._referents) > self.MAX_REFERENTS:
            self._referents = self._referents[-self.MAX_REFERENTS:]

    def referents(self) -> list[Referent]:
        """Most-recent-first view of the stack."""
        return list(reversed(self._referents))

    def find(self, slot_type: str) -> Optional[Referent]:
        for r in self.referents():
            if type_compatible(r.type, slot_type):
                return r
        return None

    def record_frame(self, frame: IntentFrame) -> None:
        self.last_frame = frame
        self._frames.append(frame)
        if len(self._frames) > self.MAX_FRAMES:
            self._frames = self._frames[-self.MAX_FRAMES:]

    def recent_frames(self) -> list[IntentFrame]:
        """Most-recent-first view of recorded frames."""
        return list(reversed(self._frames))

    def next_turn(self) -> None:
        self.turn += 1
