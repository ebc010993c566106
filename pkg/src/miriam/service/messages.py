"""Wire types shared by the chat service surfaces."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional


@dataclass
class ChatMessage:
    msg_id: int
    t: float
    author: str  # user | system
    text: str
    kind: str = "reply"  # reply | alert | reminder | clarification
    severity: Optional[str] = None
    pinned: bool = False
    alert_id: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "msg_id": self.msg_id,
            "t": self.t,
            "author": self.author,
            "text": self.text,
            "kind": self.kind,
            "severity": self.severity,
            "pinned": self.pinned,
            "alert_id": self.alert_id,
        }


@dataclass
class TrackUpdate:
    t: float
    vehicle_id: str
    x: float
    y: float
    heading: float
    battery_pct: float
    progress_pct: float
    pinned_alert_ids: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "vehicle_id": self.vehicle_id,
            "x": self.x,
            "y": self.y,
            "heading": self.heading,
            "battery_pct": self.battery_pct,
            "progress_pct": self.progress_pct,
            "pinned_alert_ids": self.pinned_alert_ids,
        }
