#!/usr/bin/env python3
"""Evaluate intent accuracy on the bundled utterance corpus.

Prints per-intent accuracy and any misses, for quick iteration on the
rules file (point MIRIAM_RULES at an alternative to compare).
"""

from collections import defaultdict

from miriam import defaults
from miriam.mission.plan import load_plan
from miriam.nlu import DialogueContext, IntentParser, Lexicon, reserved_literals


def main():
    plan = load_plan(defaults.demo_plan_text())
    rules = defaults.load_rules()
    lexicon = Lexicon.build(plan, defaults.load_static_entries(), reserved_literals(rules))
    parser = IntentParser(rules, lexicon)

    totals = defaultdict(lambda: [0, 0])  # intent -> [correct, total]
    misses = []
    for line in defaults.corpus_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        utterance, expected, kind = line.split("\t")
        frame = parser.parse(utterance, DialogueContext())
        totals[expected][1] += 1
        if frame.intent == expected:
            totals[expected][0] += 1
        else:
            misses.append((utterance, expected, frame.intent, kind))

    grand_correct = sum(c for c, _ in totals.values())
    grand_total = sum(t for _, t in totals.values())
    width = max(len(i) for i in totals)
    for intent in sorted(totals):
        correct, total = totals[intent]
        print(f"{intent:<{width}}  {correct}/{total}")
    print(f"\noverall: {grand_correct}/{grand_total} = {grand_correct / grand_total:.1%}")
    if misses:
        print("\nmisses:")
        for utterance, expected, got, kind in misses:
            print(f"  [{kind}] {utterance!r}: expected {expected}, got {got}")


if __name__ == "__main__":
    main()
