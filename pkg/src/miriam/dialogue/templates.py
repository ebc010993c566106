"""Response templates: `key.variantN = text with {placeholders}` lines.

Keys are `intent` or `intent.shape` for intents with several result
shapes.  Variant selection is deterministic round-robin per key per
session, so replies vary mildly but tests stay reproducible.
"""

from __future__ import annotations

import re

_LINE_RE = re.compile(r"^(?P<key>[\w.]+)\.v(?P<n>\d+)\s*=\s*(?P<text>.*)$")


class TemplateError(ValueError):
    pass


class TemplateSet:
    def __init__(self, variants: dict[str, list[str]]):
        self.variants = variants

    @classmethod
    def parse(cls, text: str, source: str = "templates") -> "TemplateSet":
        variants: dict[str, list[tuple[int, str]]] = {}
        for lineno, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            m = _LINE_RE.match(stripped)
            if m is None:
                raise TemplateError(f"{source}:{lineno}: expected 'key.vN = text'")
            text_value = m["text"].replace("\\n", "\n")
            variants.setdefault(m["key"], []).append((int(m["n"]), text_value))
        return cls({k: [t for _, t in sorted(v)] for k, v in variants.items()})

    def has(self, key: str) -> bool:
        return key in self.variants

    def render(self, key: str, rr: dict[str, int], **values) -> str:
        if key not in self.variants:
            raise TemplateError(f"no template for {key!r}")
        options = self.variants[key]
        idx = rr.get(key, 0)
        rr[key] = idx + 1
        template = options[idx % len(options)]
        try:
            return template.format(**values)
        except (KeyError, IndexError) as e:
            raise TemplateError(f"template {key!r} placeholder missing: {e}") from e
