from .app import create_app, mount_ui, sse_format
from .build import build_runtime
from .messages import ChatMessage, TrackUpdate
from .repl import run_repl
from .runtime import MissionRuntime
from .sessions import Session, SessionManager, SubscriberQueue, UnknownSessionError

__all__ = [
    "ChatMessage",
    "MissionRuntime",
    "Session",
    "SessionManager",
    "SubscriberQueue",
    "TrackUpdate",
    "UnknownSessionError",
    "build_runtime",
    "create_app",
    "mount_ui",
    "run_repl",
    "sse_format",
]
