"""Pattern rule DSL.

One rule per line: `intent_label : pattern tokens`, where a pattern token
is a literal word, a typed slot `$name:type`, or the wildcard `*` (at most
one per pattern).  `#` starts a comment.  File order is priority: earlier
rules win ties.
"""

from __future__ import annotations

from dataclasses import dataclass

from .text import normalize

SLOT_TYPES = ("vehicle", "objective", "location", "duration", "number")

LITERAL = "literal"
SLOT = "slot"
WILDCARD = "wildcard"


class RuleSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class PatternToken:
    kind: str
    text: str = ""       # literal word
    name: str = ""       # slot name
    slot_type: str = ""  # slot type


@dataclass(frozen=True)
class Rule:
    rule_id: str
    intent: str
    pattern: tuple[PatternToken, ...]
    priority: int

    @property
    def specificity(self) -> int:
        return sum(1 for t in self.pattern if t.kind == LITERAL)

    def literal_tokens(self) -> set[str]:
        return {t.text for t in self.pattern if t.kind == LITERAL}


def _parse_pattern(text: str, where: str) -> tuple[PatternToken, ...]:
    tokens: list[PatternToken] = []
    seen_names: set[str] = set()
    wildcards = 0
    for raw in text.split():
        if raw == "*":
            wildcards += 1
            if wildcards > 1:
                raise RuleSyntaxError(f"{where}: more than one wildcard")
            tokens.append(PatternToken(WILDCARD))
        elif raw.startswith("$"):
            body = raw[1:]
            if ":" not in body:
                raise RuleSyntaxError(f"{where}: slot {raw!r} needs a :type")
            name, slot_type = body.split(":", 1)
            if not name or slot_type not in SLOT_TYPES:
                raise RuleSyntaxError(f"{where}: bad slot {raw!r}")
            if name in seen_names:
                raise RuleSyntaxError(f"{where}: duplicate slot name {name!r}")
            seen_names.add(name)
            tokens.append(PatternToken(SLOT, name=name, slot_type=slot_type))
        else:
            normalized = normalize(raw)
            if len(normalized) != 1:
                raise RuleSyntaxError(
                    f"{where}: literal {raw!r} does not normalize to one token"
                )
            tokens.append(PatternToken(LITERAL, text=normalized[0]))
    if not tokens:
        raise RuleSyntaxError(f"{where}: empty pattern")
    return tuple(tokens)


def parse_rules(text: str, source: str = "rules") -> list[Rule]:
    rules: list[Rule] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if ":" not in stripped:
            raise RuleSyntaxError(f"{source}:{lineno}: expected 'intent : pattern'")
        intent, pattern_text = stripped.split(":", 1)
        intent = intent.strip()
        if not intent or " " in intent:
            raise RuleSyntaxError(f"{source}:{lineno}: bad intent label {intent!r}")
        where = f"{source}:{lineno}"
        rules.append(
            Rule(
                rule_id=where,
                intent=intent,
                pattern=_parse_pattern(pattern_text, where),
                priority=len(rules),
            )
        )
    return rules


def reserved_literals(rules: list[Rule]) -> frozenset[str]:
    out: set[str] = set()
    for r in rules:
        out |= r.literal_tokens()
    return frozenset(out)
