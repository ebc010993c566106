"""Chat sessions: dialogue context, message history, and stream fan-out.

Each session keeps its full message history (for resumable streams) and a
set of live subscriber queues.  Queues are bounded; when full, the oldest
track updates are dropped first and chat messages never are.
"""

from __future__ import annotations

import secrets
import threading
import time
from collections import deque
from typing import Optional

from ..dialogue.prefs import Preferences
from ..dialogue.processor import SessionState
from ..nlu.frames import DialogueContext
from .messages import ChatMessage, TrackUpdate

QUEUE_LIMIT = 10000
HISTORY_LIMIT = 10000
IDLE_TIMEOUT_S = 2 * 3600.0


class UnknownSessionError(KeyError):
    pass


class SubscriberQueue:
    """Bounded stream queue: (kind, payload) items, track dropped first."""

    def __init__(self, limit: int = QUEUE_LIMIT):
        self._items: deque = deque()
        self._limit = limit
        self._cond = threading.Condition()

    def put(self, kind: str, payload: dict) -> None:
        with self._cond:
            if len(self._items) >= self._limit:
                dropped = False
                for i, (k, _) in enumerate(self._items):
                    if k == "track":
                        del self._items[i]
                        dropped = True
                        break
                if not dropped and kind == "track":
                    return  # full of chat; shed the new track instead
            self._items.append((kind, payload))
            self._cond.notify_all()

    def get(self, timeout: Optional[float] = None) -> Optional[tuple[str, dict]]:
        with self._cond:
            if not self._items:
                self._cond.wait(timeout)
            if not self._items:
                return None
            return self._items.popleft()

    def __len__(self) -> int:
        with self._cond:
            return len(self._items)


class Session:
    def __init__(self, session_id: str, created_t: float):
        self.session_id = session_id
        self.created_t = created_t
        self.ctx = DialogueContext()
        self.state = SessionState(session_id=session_id, prefs=Preferences())
        self.turn_lock = threading.Lock()
        self.last_active = time.monotonic()
        self._lock = threading.Lock()
        self._history: list[ChatMessage] = []
        self._next_msg_id = 1
        self._subscribers: list[SubscriberQueue] = []

    @property
    def prefs(self) -> Preferences:
        return self.state.prefs

    def min_severity(self) -> str:
        return self.state.prefs.alert_min_severity

    def touch(self) -> None:
        self.last_active = time.monotonic()

    def append_message(
        self,
        t: float,
        author: str,
        text: str,
        kind: str = "reply",
        severity: Optional[str] = None,
        pinned: bool = False,
        alert_id: Optional[int] = None,
    ) -> ChatMessage:
        with self._lock:
            msg = ChatMessage(
                msg_id=self._next_msg_id, t=t, author=author, text=text,
                kind=kind, severity=severity, pinned=pinned, alert_id=alert_id,
            )
            self._next_msg_id += 1
            self._history.append(msg)
            if len(self._history) > HISTORY_LIMIT:
                self._history = self._history[-HISTORY_LIMIT:]
            for q in self._subscribers:
                q.put("chat", msg.to_dict())
            return msg

    def push_track(self, update: TrackUpdate) -> None:
        with self._lock:
            for q in self._subscribers:
                q.put("track", update.to_dict())

    def subscribe(self, after: Optional[int] = None) -> tuple[list[ChatMessage], SubscriberQueue]:
        """Atomically compute the replay gap and attach a live queue."""
        with self._lock:
            replay = [m for m in self._history if after is None or m.msg_id > after]
            q = SubscriberQueue()
            self._subscribers.append(q)
            return replay, q

    def unsubscribe(self, q: SubscriberQueue) -> None:
        with self._lock:
            if q in self._subscribers:
                self._subscribers.remove(q)

    def history(self) -> list[ChatMessage]:
        with self._lock:
            return list(self._history)


class SessionManager:
    def __init__(self, idle_timeout_s: float = IDLE_TIMEOUT_S):
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}
        self.idle_timeout_s = idle_timeout_s

    def open(self, now_t: float) -> Session:
        with self._lock:
            session_id = secrets.token_urlsafe(16)
            session = Session(session_id, created_t=now_t)
            self._sessions[session_id] = session
            return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            self._expire_locked()
            session = self._sessions.get(session_id)
            if session is None:
                raise UnknownSessionError(session_id)
            session.touch()
            return session

    def alive(self) -> list[Session]:
        with self._lock:
            self._expire_locked()
            return list(self._sessions.values())

    def _expire_locked(self) -> None:
        now = time.monotonic()
        expired = [
            sid for sid, s in self._sessions.items()
            if now - s.last_active > self.idle_timeout_s
        ]
        for sid in expired:
            del self._sessions[sid]

    def __len__(self) -> int:
        with self._lock:
            return len(self._sessions)
