"""Pattern alignment: match token lists against rule patterns.

Literals match exactly; a slot consumes the longest lexicon span of its
type at that position (duration/number slots use their token grammars); a
wildcard consumes any span, shortest first.  A rule's specificity is its
literal-token count; ties break on file order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .frames import EXPLICIT, Slot
from .lexicon import Lexicon
from .rules import LITERAL, SLOT, WILDCARD, Rule
from .text import match_duration, match_number

PRONOUNS = ("it", "its", "that", "there")
# "there" stands in for places only.
LOCATION_ONLY_PRONOUNS = ("there",)


@dataclass
class Candidate:
    rule: Rule
    slots: dict[str, Slot] = field(default_factory=dict)
    pronoun_slots: dict[str, str] = field(default_factory=dict)  # slot name -> pronoun
    wildcard_span: tuple[int, int] = (0, 0)

    @property
    def intent(self) -> str:
        return self.rule.intent

    @property
    def specificity(self) -> int:
        return self.rule.specificity


def _pronoun_ok(token: str, slot_type: str) -> bool:
    if token not in PRONOUNS:
        return False
    if token in LOCATION_ONLY_PRONOUNS:
        return slot_type == "location"
    return slot_type in ("vehicle", "objective", "location")


def match_pattern(rule: Rule, tokens: list[str], lexicon: Lexicon) -> Optional[Candidate]:
    pattern = rule.pattern

    def align(pi: int, ti: int, cand: Candidate) -> Optional[Candidate]:
        if pi == len(pattern):
            return cand if ti == len(tokens) else None
        pt = pattern[pi]
        if pt.kind == LITERAL:
            if ti < len(tokens) and tokens[ti] == pt.text:
                return align(pi + 1, ti + 1, cand)
            return None
        if pt.kind == SLOT:
            if pt.slot_type == "duration":
                hit = match_duration(tokens, ti)
                if hit is None:
                    return None
                length, seconds = hit
                cand.slots[pt.name] = Slot(pt.name, seconds, "duration", EXPLICIT, (ti, ti + length))
                result = align(pi + 1, ti + length, cand)
                if result is None:
                    del cand.slots[pt.name]
                return result
            if pt.slot_type == "number":
                hit = match_number(tokens, ti)
                if hit is None:
                    return None
                length, value = hit
                cand.slots[pt.name] = Slot(pt.name, value, "number", EXPLICIT, (ti, ti + length))
                result = align(pi + 1, ti + length, cand)
                if result is None:
                    del cand.slots[pt.name]
                return result
            # entity slot: longest lexicon span first, then pronouns
            limit = min(lexicon.max_span, len(tokens) - ti)
            for length in range(limit, 0, -1):
                entry = lexicon.entries.get(" ".join(tokens[ti:ti + length]))
                if entry is None or not _type_ok(entry.type, pt.slot_type):
                    continue
                cand.slots[pt.name] = Slot(
                    pt.name, entry.canonical, pt.slot_type, EXPLICIT, (ti, ti + length)
                )
                result = align(pi + 1, ti + length, cand)
                if result is not None:
                    return result
                del cand.slots[pt.name]
            if ti < len(tokens) and _pronoun_ok(tokens[ti], pt.slot_type):
                cand.slots[pt.name] = Slot(pt.name, tokens[ti], pt.slot_type, EXPLICIT, (ti, ti + 1))
                cand.pronoun_slots[pt.name] = tokens[ti]
                result = align(pi + 1, ti + 1, cand)
                if result is not None:
                    return result
                del cand.slots[pt.name]
                del cand.pronoun_slots[pt.name]
            return None
        # wildcard: shortest consumption first
        for length in range(0, len(tokens) - ti + 1):
            cand.wildcard_span = (ti, ti + length)
            result = align(pi + 1, ti + length, cand)
            if result is not None:
                return result
        cand.wildcard_span = (0, 0)
        return None

    return align(0, 0, Candidate(rule=rule))


def _type_ok(entity_type: str, slot_type: str) -> bool:
    from .lexicon import type_compatible

    return type_compatible(entity_type, slot_type)


def match_rules(tokens: list[str], lexicon: Lexicon, rules: list[Rule]) -> list[Candidate]:
    """All matching rules, best first (specificity desc, then file order)."""
    if not tokens:
        return []
    candidates = []
    for rule in rules:
        cand = match_pattern(rule, tokens, lexicon)
        if cand is not None:
            candidates.append(cand)
    candidates.sort(key=lambda c: (-c.specificity, c.rule.priority))
    return candidates
