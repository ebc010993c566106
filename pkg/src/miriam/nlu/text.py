"""Utterance normalization and small token grammars (numbers, durations)."""

from __future__ import annotations

import re
from typing import Optional

_CONTRACTIONS = {
    "what's": "what is",
    "where's": "where is",
    "when's": "when is",
    "how's": "how is",
    "it's": "it is",
    "that's": "that is",
    "there's": "there is",
    "i'm": "i am",
    "don't": "do not",
    "can't": "can not",
    "won't": "will not",
    "isn't": "is not",
    "didn't": "did not",
    "doesn't": "does not",
    "hasn't": "has not",
    "haven't": "have not",
}

_CONTRACTION_RE = {
    re.compile(rf"\b{re.escape(k)}\b"): v for k, v in _CONTRACTIONS.items()
}

NUMBER_WORDS = {
    "a": 1, "an": 1, "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
    "six": 6, "seven": 7, "eight": 8, "nine": 9, "ten": 10, "fifteen": 15,
    "twenty": 20, "thirty": 30, "sixty": 60, "ninety": 90,
}

DURATION_UNITS = {
    "second": 1.0, "seconds": 1.0, "sec": 1.0, "secs": 1.0, "s": 1.0,
    "minute": 60.0, "minutes": 60.0, "min": 60.0, "mins": 60.0,
    "hour": 3600.0, "hours": 3600.0, "hr": 3600.0, "hrs": 3600.0, "h": 3600.0,
}

_NUMERIC_RE = re.compile(r"^\d+(\.\d+)?$")


def normalize(utterance: str) -> list[str]:
    """Case-fold, strip punctuation, split into tokens.

    Digits and underscores inside name tokens survive ("Survey0" ->
    "survey0"); decimal points between digits survive; everything else
    becomes whitespace.
    """
    text = utterance.casefold().replace("’", "'")
    for pattern, repl in _CONTRACTION_RE.items():
        text = pattern.sub(repl, text)
    text = re.sub(r"'s\b", "", text)  # possessives
    text = text.replace("'", "")
    text = re.sub(r"[^\w\s.]", " ", text)
    text = re.sub(r"\.(?!\d)", " ", text)
    text = re.sub(r"(?<!\d)\.", " ", text)
    return text.split()


def parse_number(token: str, allow_articles: bool = False) -> Optional[float]:
    if _NUMERIC_RE.match(token):
        return float(token)
    if token in NUMBER_WORDS:
        if token in ("a", "an") and not allow_articles:
            return None
        return float(NUMBER_WORDS[token])
    return None


def match_duration(tokens: list[str], start: int) -> Optional[tuple[int, float]]:
    """Match `<number> <unit>` at start; returns (span length, seconds)."""
    if start >= len(tokens):
        return None
    n = parse_number(tokens[start], allow_articles=True)
    if n is None:
        return None
    if start + 1 < len(tokens) and tokens[start + 1] in DURATION_UNITS:
        return 2, n * DURATION_UNITS[tokens[start + 1]]
    return None


def match_number(tokens: list[str], start: int) -> Optional[tuple[int, float]]:
    if start >= len(tokens):
        return None
    n = parse_number(tokens[start])
    return (1, n) if n is not None else None
