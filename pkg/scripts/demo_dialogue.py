#!/usr/bin/env python3
"""Run the bundled demo mission in-process and transcript a short dialogue.

Advances the simulation past the scripted fault, opens a chat session, and
prints the replies plus any proactive alerts, so you can eyeball the whole
pipeline without starting a server.
"""

import argparse
from importlib import resources

from miriam.service.build import build_runtime


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--advance", type=float, default=600.0,
                    help="sim-seconds to run before chatting")
    args = ap.parse_args()

    demo = resources.files("miriam") / "demo"
    rt = build_runtime(str(demo / "plan.json"), str(demo / "scenario.json"))
    session, greeting = rt.open_session()
    rt.advance_seconds(args.advance)

    print(f"miriam> {greeting.text}\n")
    turns = [
        "Where is Survey0?",
        "What time did it finish?",
        "What about Survey1?",
        "What is the status of auv1?",
        "When will auv1 get to Survey1?",
        "Are there any faults?",
        "What happened in the last 5 minutes?",
        "How is the mission going?",
    ]
    for text in turns:
        reply = rt.post_message(session.session_id, text)
        print(f"you>    {text}")
        print(f"miriam> {reply.text}\n")

    alerts = [m for m in session.history() if m.kind in ("alert", "reminder")]
    if alerts:
        print("--- proactive messages received meanwhile ---")
        for m in alerts:
            pin = " [PINNED]" if m.pinned else ""
            print(f"[{m.t:7.1f}s] {m.severity or m.kind}{pin}: {m.text}")


if __name__ == "__main__":
    main()
