"""Local chat REPL: the full assistant on stdin/stdout, sim in-process.

Replies are printed as `miriam> <text>` lines.  Proactive alerts and
reminders interleave: on a TTY a background printer emits them as they
arrive; in pipe mode they are drained after each turn so output stays
deterministic.
"""

from __future__ import annotations

import sys
import threading
from typing import IO, Optional

from .runtime import MissionRuntime

PROMPT = "you> "
QUIT_WORDS = frozenset({"quit", "exit", "bye"})


def _print_push(payload: dict, output: IO[str]) -> None:
    kind = payload.get("kind", "")
    severity = payload.get("severity") or kind
    pin = " [PINNED]" if payload.get("pinned") else ""
    output.write(f"*** {severity.upper()}{pin}: {payload.get('text', '')}\n")
    output.flush()


def run_repl(
    runtime: MissionRuntime,
    speed: float = 1.0,
    input_stream: Optional[IO[str]] = None,
    output: Optional[IO[str]] = None,
) -> None:
    input_stream = input_stream or sys.stdin
    output = output or sys.stdout
    interactive = hasattr(input_stream, "isatty") and input_stream.isatty()

    session, greeting = runtime.open_session()
    output.write(f"miriam> {greeting.text}\n")
    output.flush()

    _, queue = session.subscribe(after=greeting.msg_id)
    stop = threading.Event()

    def drain(blocking: bool) -> None:
        while True:
            item = queue.get(timeout=0.2 if blocking else 0.0)
            if item is None:
                if blocking and not stop.is_set():
                    continue
                return
            kind, payload = item
            if kind == "chat" and payload.get("kind") in ("alert", "reminder"):
                _print_push(payload, output)

    printer = None
    if interactive:
        printer = threading.Thread(target=lambda: drain(blocking=True), daemon=True)
        printer.start()

    runtime.start_ticker(speed)
    try:
        while True:
            if interactive:
                output.write(PROMPT)
                output.flush()
            line = input_stream.readline()
            if not line:
                break
            text = line.strip()
            if text.casefold() in QUIT_WORDS:
                break
            reply = runtime.post_message(session.session_id, text)
            output.write(f"miriam> {reply.text}\n")
            output.flush()
            if not interactive:
                drain(blocking=False)
    finally:
        stop.set()
        runtime.stop()
