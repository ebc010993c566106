"""Test harness: run the FastAPI app on a real port, plus an SSE reader."""

from __future__ import annotations

import socket
import threading
import time

import uvicorn


def free_port() -> int:
    s = socket.socket()
    s.bind(("127.0.0.1", 0))
    port = s.getsockname()[1]
    s.close()
    return port


class ServerHarness:
    def __init__(self, app, port: int | None = None):
        self.port = port or free_port()
        config = uvicorn.Config(app, host="127.0.0.1", port=self.port, log_level="warning")
        self.server = uvicorn.Server(config)
        self.thread = threading.Thread(target=self.server.run, daemon=True)

    @property
    def base_url(self) -> str:
        return f"http://127.0.0.1:{self.port}"

    def __enter__(self) -> "ServerHarness":
        self.thread.start()
        deadline = time.time() + 15
        while not self.server.started:
            if time.time() > deadline:
                raise RuntimeError("server did not start")
            time.sleep(0.02)
        return self

    def __exit__(self, *exc) -> None:
        self.server.should_exit = True
        self.thread.join(timeout=10)


def read_sse_events(line_iter, count: int, want: set[str] | None = None) -> list[dict]:
    """Collect `count` parsed SSE events (optionally only of `want` types)."""
    events = []
    current: dict = {}
    for line in line_iter:
        if line == "":
            if current:
                if want is None or current.get("event") in want:
                    events.append(current)
                current = {}
                if len(events) >= count:
                    return events
            continue
        if ":" not in line:
            continue
        key, value = line.split(":", 1)
        current[key.strip()] = value.strip()
    return events
