"""Utterance -> IntentFrame pipeline with anaphora and ellipsis handling.

Pipeline: normalize -> ellipsis check -> rule matching -> anaphora
resolution on the winning candidate -> required-slot completion from
context.  Parsing never touches mission data; the dialogue context is the
only thing mutated.
"""

from __future__ import annotations

import logging
from typing import Optional

from .frames import (
    ANAPHORA,
    CLARIFY,
    ELLIPSIS,
    EXPLICIT,
    REQUIRED_SLOT_TYPES,
    UNKNOWN,
    DialogueContext,
    IntentFrame,
    Slot,
    clarification,
)
from .lexicon import LexEntry, Lexicon, type_compatible
from .matcher import Candidate, match_rules
from .rules import Rule
from .text import normalize

logger = logging.getLogger(__name__)

ELLIPSIS_LEADINS = (("what", "about"), ("how", "about"), ("and",))


def resolve_anaphora(candidate: Candidate, ctx: DialogueContext) -> IntentFrame:
    """Bind pronoun-filled slots to the most recent compatible referent."""
    slots: dict[str, Slot] = {}
    for name, slot in candidate.slots.items():
        if name in candidate.pronoun_slots:
            ref = ctx.find(slot.type)
            if ref is None:
                return clarification(raw="", missing=slot.type)
            slots[name] = Slot(name, ref.entity, slot.type, ANAPHORA, slot.span)
        else:
            slots[name] = slot
    return IntentFrame(intent=candidate.intent, slots=slots, confidence=candidate.specificity)


def resolve_ellipsis(
    tokens: list[str], ctx: DialogueContext, lexicon: Lexicon
) -> Optional[IntentFrame]:
    """Handle elliptical follow-ups like "what about Survey1?".

    Returns None when the tokens are not an ellipsis trigger.  The cloned
    frame is the most recent one holding an explicitly mentioned slot the
    entity can replace, so an intervening pronoun question does not hijack
    the reused structure.
    """
    entity = _trigger_entity(tokens, lexicon)
    if entity is None:
        return None
    for frame in ctx.recent_frames():
        for name, slot in frame.slots.items():
            if slot.source == EXPLICIT and type_compatible(entity.type, slot.type):
                slots = dict(frame.slots)
                slots[name] = Slot(name, entity.canonical, slot.type, ELLIPSIS)
                return IntentFrame(
                    intent=frame.intent, slots=slots, confidence=frame.confidence
                )
    return clarification(raw="", missing=entity.type)


def _trigger_entity(tokens: list[str], lexicon: Lexicon) -> Optional[LexEntry]:
    rests = []
    for leadin in ELLIPSIS_LEADINS:
        if len(tokens) > len(leadin) and tuple(tokens[: len(leadin)]) == leadin:
            rests.append(tokens[len(leadin):])
    rests.append(tokens)  # a bare entity is a trigger too
    for rest in rests:
        entry = lexicon.entries.get(" ".join(rest))
        if entry is not None:
            return entry
    return None


class IntentParser:
    """Shared, immutable rule set + lexicon; context comes per call."""

    def __init__(self, rules: list[Rule], lexicon: Lexicon):
        self.rules = rules
        self.lexicon = lexicon

    def parse(self, utterance: str, ctx: DialogueContext) -> IntentFrame:
        ctx.next_turn()
        tokens = normalize(utterance)
        if not tokens:
            frame = clarification(raw=utterance)
            return frame

        frame = resolve_ellipsis(tokens, ctx, self.lexicon)
        if frame is None:
            candidates = match_rules(tokens, self.lexicon, self.rules)
            if not candidates:
                frame = IntentFrame(intent=UNKNOWN, raw=utterance)
            else:
                frame = resolve_anaphora(candidates[0], ctx)
                if not frame.is_clarification:
                    frame.note = _wildcard_text(candidates[0], tokens)
                    missing = self._missing_required(frame)
                    if missing is not None:
                        ref = ctx.find(missing)
                        if ref is not None:
                            frame.slots[missing] = Slot(missing, ref.entity, missing, ANAPHORA)
                        else:
                            frame = clarification(raw=utterance, missing=missing)
        frame.raw = utterance

        if frame.is_clarification:
            return frame
        for slot in frame.entity_slots():
            if isinstance(slot.value, str):
                ctx.push(slot.value, self._entity_type(slot))
        ctx.record_frame(frame)
        return frame

    def _entity_type(self, slot: Slot) -> str:
        entry = self.lexicon.lookup(str(slot.value))
        return entry.type if entry is not None else slot.type

    @staticmethod
    def _missing_required(frame: IntentFrame) -> Optional[str]:
        for slot_type in REQUIRED_SLOT_TYPES.get(frame.intent, ()):
            if frame.slot_of_type(slot_type) is None:
                return slot_type
        return None


def _wildcard_text(candidate: Candidate, tokens: list[str]) -> str:
    start, end = candidate.wildcard_span
    return " ".join(tokens[start:end])
