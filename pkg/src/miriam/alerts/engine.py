"""Mixed-initiative alerting: severity classification, throttling, pins,
acknowledgements and reminders.

Alerts fan out to every live session whose minimum-severity preference
permits.  Duplicate (event type, subject) pairs inside the throttle window
are suppressed unless the severity escalated; critical events are never
throttled, so every critical reaches every session exactly once.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from typing import Iterable, Optional, Protocol

from ..mission.store import MissionStore
from ..mission.types import EventType, MissionEvent

SEVERITIES = ("info", "warning", "critical")
_RANK = {s: i for i, s in enumerate(SEVERITIES)}

DEFAULT_SEVERITIES = {
    EventType.FAULT: "critical",
    EventType.BATTERY_CRITICAL: "critical",
    EventType.BATTERY_WARNING: "warning",
    EventType.OBJECTIVE_CHANGED: "warning",
    EventType.OBSTACLE_DETECTED: "warning",
    EventType.OBJECTIVE_STARTED: "info",
    EventType.OBJECTIVE_COMPLETED: "info",
    EventType.TARGET_DETECTED: "info",
    EventType.MISSION_COMPLETED: "info",
    EventType.REPORT: "info",
}


class PolicyError(ValueError):
    pass


@dataclass
class AlertPolicy:
    severities: dict[EventType, str] = field(default_factory=lambda: dict(DEFAULT_SEVERITIES))
    warning_pct: float = 30.0
    critical_pct: float = 15.0
    throttle_window_s: float = 60.0

    def validate(self) -> None:
        if self.critical_pct >= self.warning_pct:
            raise PolicyError("critical_pct must be < warning_pct")
        for et, sev in self.severities.items():
            if sev not in SEVERITIES:
                raise PolicyError(f"bad severity {sev!r} for {et.value}")


def load_policy(document: str) -> AlertPolicy:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as e:
        raise PolicyError(f"policy is not valid JSON: {e}") from e
    severities = dict(DEFAULT_SEVERITIES)
    for key, value in doc.get("severities", {}).items():
        severities[EventType(key)] = str(value)
    thresholds = doc.get("thresholds", {})
    policy = AlertPolicy(
        severities=severities,
        warning_pct=float(thresholds.get("warning_pct", 30.0)),
        critical_pct=float(thresholds.get("critical_pct", 15.0)),
        throttle_window_s=float(doc.get("throttle_window_s", 60.0)),
    )
    policy.validate()
    return policy


def classify(event: MissionEvent, policy: AlertPolicy) -> str:
    return policy.severities.get(event.type, "info")


@dataclass
class Alert:
    alert_id: int
    session_id: str
    t: float
    severity: str
    key: tuple[str, str]  # (event type, subject)
    text: str
    vehicle_id: str = ""
    pinned: bool = False
    acknowledged: bool = False


@dataclass
class Reminder:
    reminder_id: int
    session_id: str
    text: str
    fire_at: Optional[float] = None  # time trigger
    event_type: Optional[EventType] = None  # event trigger
    subject: str = ""
    fired: bool = False

    def message_text(self) -> str:
        if self.text:
            return f"Reminder: {self.text}"
        if self.event_type is EventType.OBJECTIVE_COMPLETED:
            return f"Reminder: {self.subject} is complete."
        if self.event_type is EventType.MISSION_COMPLETED:
            return "Reminder: the mission is complete."
        return "Reminder."


class SessionLike(Protocol):
    session_id: str

    def min_severity(self) -> str: ...


def alert_text(event: MissionEvent, severity: str) -> str:
    if event.type is EventType.FAULT:
        text = f"Fault {event.subject} on {event.vehicle_id}"
        if event.detail:
            text += f" ({event.detail})"
        return text + "."
    if event.type in (EventType.BATTERY_WARNING, EventType.BATTERY_CRITICAL):
        return f"Battery on {event.vehicle_id} below {event.subject}: {event.detail}."
    if event.type is EventType.OBJECTIVE_CHANGED:
        return f"Objective {event.subject} was replanned."
    if event.type is EventType.OBSTACLE_DETECTED:
        return f"Obstacle detected on {event.subject}; routing around it."
    if event.type is EventType.OBJECTIVE_STARTED:
        return f"{event.vehicle_id} started {event.subject}."
    if event.type is EventType.OBJECTIVE_COMPLETED:
        return f"{event.vehicle_id} completed {event.subject}."
    if event.type is EventType.TARGET_DETECTED:
        return f"Target of interest detected; added {event.subject}."
    if event.type is EventType.MISSION_COMPLETED:
        return "Mission complete."
    if event.type is EventType.REPORT:
        return event.subject or event.detail
    return f"{event.type.value}: {event.subject}"


@dataclass
class EventOutcome:
    alerts: list[Alert] = field(default_factory=list)
    reminders: list[Reminder] = field(default_factory=list)
    suppressed: bool = False


class AlertEngine:
    def __init__(self, policy: AlertPolicy, store: Optional[MissionStore] = None):
        policy.validate()
        self.policy = policy
        self.store = store
        self._lock = threading.RLock()
        self._alerts: dict[str, list[Alert]] = {}
        self._reminders: list[Reminder] = []
        self._throttle: dict[tuple[str, str], tuple[float, int]] = {}
        self._next_alert_id = 1
        self._next_reminder_id = 1

    # -- proactive path -------------------------------------------------------

    def on_event(
        self, event: MissionEvent, sessions: Iterable[SessionLike], now: float
    ) -> EventOutcome:
        """Classify, throttle, and fan an event out to sessions."""
        with self._lock:
            outcome = EventOutcome()
            severity = classify(event, self.policy)
            rank = _RANK[severity]
            key = (event.type.value, event.subject)
            last = self._throttle.get(key)
            throttled = (
                severity != "critical"
                and last is not None
                and now - last[0] < self.policy.throttle_window_s
                and rank <= last[1]
            )
            if throttled:
                outcome.suppressed = True
            else:
                self._throttle[key] = (now, rank)
                text = alert_text(event, severity)
                for session in sessions:
                    if rank < _RANK[session.min_severity()]:
                        continue
                    alert = Alert(
                        alert_id=self._next_alert_id,
                        session_id=session.session_id,
                        t=event.t,
                        severity=severity,
                        key=key,
                        text=text,
                        vehicle_id=event.vehicle_id,
                        pinned=severity == "critical",
                    )
                    self._next_alert_id += 1
                    self._alerts.setdefault(session.session_id, []).append(alert)
                    outcome.alerts.append(alert)
            for reminder in self._reminders:
                if reminder.fired or reminder.event_type is None:
                    continue
                if reminder.event_type is not event.type:
                    continue
                if reminder.subject and reminder.subject.casefold() != event.subject.casefold():
                    continue
                reminder.fired = True
                outcome.reminders.append(reminder)
            return outcome

    def tick(self, now: float) -> list[Reminder]:
        """Fire due time reminders, at most once each, in id order."""
        with self._lock:
            fired = []
            for reminder in self._reminders:
                if reminder.fired or reminder.fire_at is None:
                    continue
                if reminder.fire_at <= now:
                    reminder.fired = True
                    fired.append(reminder)
            fired.sort(key=lambda r: r.reminder_id)
            return fired

    # -- session-facing path ----------------------------------------------------

    def add_time_reminder(self, session_id: str, fire_at: float, text: str = "") -> Reminder:
        with self._lock:
            reminder = Reminder(
                reminder_id=self._next_reminder_id, session_id=session_id,
                text=text, fire_at=fire_at,
            )
            self._next_reminder_id += 1
            self._reminders.append(reminder)
            return reminder

    def add_event_reminder(
        self, session_id: str, event_type: EventType, subject: str, text: str = ""
    ) -> Reminder:
        with self._lock:
            reminder = Reminder(
                reminder_id=self._next_reminder_id, session_id=session_id,
                text=text, event_type=event_type, subject=subject,
            )
            self._next_reminder_id += 1
            self._reminders.append(reminder)
            return reminder

    def acknowledge(
        self, session_id: str, alert_id: Optional[int] = None, tokens: Optional[list[str]] = None
    ) -> tuple[str, Optional[Alert]]:
        """Acknowledge by id or by fault code tokens.

        Returns one of ("acked", alert), ("already", alert),
        ("unknown", None), ("none_pinned", None).
        """
        with self._lock:
            alerts = self._alerts.get(session_id, [])
            if alert_id is not None:
                for alert in alerts:
                    if alert.alert_id == alert_id:
                        return self._ack(alert)
                return "unknown", None
            pinned = [a for a in alerts if a.pinned]
            if tokens:
                token_set = {t.casefold() for t in tokens}
                for alert in pinned:
                    if alert.key[1].casefold() in token_set:
                        return self._ack(alert)
            if not pinned:
                return "none_pinned", None
            if len(pinned) == 1:
                return self._ack(pinned[0])
            return "unknown", None

    def _ack(self, alert: Alert) -> tuple[str, Alert]:
        if alert.acknowledged:
            return "already", alert
        alert.acknowledged = True
        alert.pinned = False
        if alert.key[0] == EventType.FAULT.value and self.store is not None:
            self.store.acknowledge_fault(alert.vehicle_id, alert.key[1])
        return "acked", alert

    def pinned(self, session_id: str) -> list[Alert]:
        with self._lock:
            return [a for a in self._alerts.get(session_id, []) if a.pinned]

    def alerts_for(self, session_id: str) -> list[Alert]:
        with self._lock:
            return list(self._alerts.get(session_id, []))

    def drop_session(self, session_id: str) -> None:
        with self._lock:
            self._alerts.pop(session_id, None)
            self._reminders = [r for r in self._reminders if r.session_id != session_id]
