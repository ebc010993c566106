"""Turn intent frames into replies by querying the mission store.

The processor only reads the store; its writes are session-local
(preferences) or go through the alert engine (reminders,
acknowledgements).  Every entity named in a reply is returned in
`Reply.mentions` so the caller can push it onto the dialogue context for
follow-up pronouns.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

from ..mission.store import MissionStore
from ..mission.types import EventType, MissionEvent, ObjectiveState, Waypoint
from ..nlu.frames import CLARIFY, UNKNOWN, IntentFrame
from ..nlu.text import normalize
from .prefs import PreferenceError, Preferences
from .render import fmt_duration, fmt_position, fmt_speed, fmt_time
from .templates import TemplateSet

logger = logging.getLogger(__name__)

HISTORY_LIMIT = 8

COMPLETION_WORDS = frozenset(
    {"complete", "completed", "completes", "done", "finish", "finished", "finishes"}
)

# Every reply shape the dispatcher can emit, per intent; the template file
# must cover all of them (enforced by a test).
REPLY_SHAPES = {
    "vehicle_status": ("ok", "idle", "no_data"),
    "vehicle_location": ("ok", "no_data"),
    "plan_summary": ("ok",),
    "current_objective": ("ok", "idle", "no_data", "which_vehicle"),
    "eta_location": ("eta", "completed", "unreachable", "no_data", "which_vehicle"),
    "etc_objective": ("etc", "completed", "unreachable", "no_data"),
    "objective_location": ("ok",),
    "objective_finish_time": ("done", "not_done"),
    "past_activities": ("some", "none"),
    "progress": ("ok",),
    "fault_diagnosis": ("some", "none", "which_vehicle"),
    "create_reminder": ("time_set", "event_set", "mission_set", "need_trigger"),
    "set_preference": ("time_set", "units_set", "alert_set", "unknown_option"),
    "acknowledge_alert": ("acked", "already", "unknown", "none_pinned"),
    "help": ("ok",),
    UNKNOWN: ("ok",),
    CLARIFY: ("vehicle", "objective", "location", "generic"),
}

CLARIFYING_SHAPES = frozenset(
    {"which_vehicle", "need_trigger", "unknown_option", "generic"}
)


@dataclass
class SessionState:
    """The slice of session state the processor needs."""

    session_id: str
    prefs: Preferences = field(default_factory=Preferences)
    rr: dict[str, int] = field(default_factory=dict)


@dataclass
class Reply:
    text: str
    kind: str = "reply"  # reply | clarification
    mentions: list[tuple[str, str]] = field(default_factory=list)


def _reminder_note(tail: str) -> str:
    """Free-text note after the trigger phrase, trigger words stripped."""
    tokens = tail.split()
    while tokens and tokens[0] in COMPLETION_WORDS:
        tokens.pop(0)
    if tokens and tokens[0] == "to":
        tokens.pop(0)
    return " ".join(tokens)


class DialogueProcessor:
    def __init__(
        self,
        store: MissionStore,
        templates: TemplateSet,
        alert_engine,
        clock: Optional[Callable[[], float]] = None,
    ):
        self.store = store
        self.templates = templates
        self.engine = alert_engine
        self.clock = clock or store.current_time

    # -- dispatch -------------------------------------------------------------

    def handle(self, frame: IntentFrame, session: SessionState) -> Reply:
        handler = getattr(self, f"_do_{frame.intent}", None)
        if handler is None:
            return self._reply(session, UNKNOWN, "ok")
        return handler(frame, session)

    def _reply(
        self,
        session: SessionState,
        intent: str,
        shape: str,
        mentions: Optional[list[tuple[str, str]]] = None,
        **values,
    ) -> Reply:
        key = f"{intent}.{shape}" if shape else intent
        text = self.templates.render(key, session.rr, **values)
        kind = "clarification" if intent == CLARIFY or shape in CLARIFYING_SHAPES else "reply"
        return Reply(text=text, kind=kind, mentions=mentions or [])

    # -- helpers --------------------------------------------------------------

    def _vehicle_for(self, frame: IntentFrame) -> Optional[str]:
        slot = frame.slot_of_type("vehicle")
        if slot is not None:
            return self.store.plan.vehicle(str(slot.value)).vehicle_id
        if len(self.store.plan.vehicles) == 1:
            return self.store.plan.vehicles[0].vehicle_id
        return None

    def _describe_event(self, e: MissionEvent, prefs: Preferences) -> str:
        when = fmt_time(e.t, prefs)
        if e.type is EventType.REPORT:
            body = e.subject if e.subject else e.detail
        elif e.type is EventType.FAULT:
            body = f"fault {e.subject} on {e.vehicle_id}"
        elif e.type is EventType.OBJECTIVE_STARTED:
            body = f"{e.subject} started"
        elif e.type is EventType.OBJECTIVE_COMPLETED:
            body = f"{e.subject} completed"
        elif e.type is EventType.OBJECTIVE_CHANGED:
            body = f"{e.subject} replanned"
        elif e.type is EventType.OBSTACLE_DETECTED:
            body = f"obstacle detected on {e.subject}"
        elif e.type is EventType.TARGET_DETECTED:
            body = f"target detected ({e.subject})"
        elif e.type in (EventType.BATTERY_WARNING, EventType.BATTERY_CRITICAL):
            body = f"{e.vehicle_id} battery below {e.subject} ({e.detail})"
        elif e.type is EventType.MISSION_COMPLETED:
            body = "mission completed"
        else:
            body = f"{e.type.value} {e.subject}".strip()
        return f"[{when}] {body}"

    # -- intent handlers --------------------------------------------------------

    def _do_vehicle_status(self, frame: IntentFrame, session: SessionState) -> Reply:
        vehicle = self._vehicle_for(frame)
        state = self.store.latest_state(vehicle)
        if state is None:
            return self._reply(
                session, "vehicle_status", "no_data",
                mentions=[(vehicle, "vehicle")], vehicle=vehicle,
            )
        mentions = [(vehicle, "vehicle")]
        values = {
            "vehicle": vehicle,
            "health": state.health.value,
            "battery": f"{state.battery_pct:.0f}",
            "speed": fmt_speed(state.speed, session.prefs),
        }
        if state.active_objective:
            mentions.append((state.active_objective, "objective"))
            return self._reply(
                session, "vehicle_status", "ok", mentions=mentions,
                objective=state.active_objective, **values,
            )
        return self._reply(session, "vehicle_status", "idle", mentions=mentions, **values)

    def _do_vehicle_location(self, frame: IntentFrame, session: SessionState) -> Reply:
        vehicle = self._vehicle_for(frame)
        state = self.store.latest_state(vehicle)
        if state is None:
            return self._reply(
                session, "vehicle_location", "no_data",
                mentions=[(vehicle, "vehicle")], vehicle=vehicle,
            )
        return self._reply(
            session, "vehicle_location", "ok",
            mentions=[(vehicle, "vehicle")],
            vehicle=vehicle,
            position=fmt_position(state.x, state.y),
            depth=f"{state.depth:.0f}",
            heading=f"{state.heading:.0f}",
        )

    def _do_plan_summary(self, frame: IntentFrame, session: SessionState) -> Reply:
        plan = self.store.plan
        statuses = self.store.all_objective_status()
        vehicle_list = ", ".join(v.vehicle_id for v in plan.vehicles)
        objective_list = "; ".join(
            f"{o.name} ({o.kind.value}, {statuses[o.name].status.value})"
            for o in plan.objectives
        )
        mentions = [(v.vehicle_id, "vehicle") for v in plan.vehicles]
        mentions += [(o.name, "objective") for o in plan.objectives]
        return self._reply(
            session, "plan_summary", "ok", mentions=mentions,
            plan_id=plan.plan_id, count=len(plan.objectives),
            vehicle_list=vehicle_list, objective_list=objective_list,
        )

    def _do_current_objective(self, frame: IntentFrame, session: SessionState) -> Reply:
        vehicle = self._vehicle_for(frame)
        if vehicle is None:
            return self._reply(session, "current_objective", "which_vehicle")
        state = self.store.latest_state(vehicle)
        if state is None:
            return self._reply(
                session, "current_objective", "no_data",
                mentions=[(vehicle, "vehicle")], vehicle=vehicle,
            )
        if not state.active_objective:
            return self._reply(
                session, "current_objective", "idle",
                mentions=[(vehicle, "vehicle")], vehicle=vehicle,
            )
        obj = self.store.plan.objective(state.active_objective)
        return self._reply(
            session, "current_objective", "ok",
            mentions=[(vehicle, "vehicle"), (obj.name, "objective")],
            vehicle=vehicle, objective=obj.name, kind=obj.kind.value,
            waypoints=len(obj.waypoints),
        )

    def _do_eta_location(self, frame: IntentFrame, session: SessionState) -> Reply:
        slot = frame.slot_of_type("location")
        target = str(slot.value)
        mentions: list[tuple[str, str]] = []
        if self.store.plan.has_objective(target):
            obj = self.store.plan.objective(target)
            vehicle = obj.vehicle_id
            result = self.store.eta_to(vehicle, obj.name)
            mentions.append((obj.name, "objective"))
        else:
            vehicle = self._vehicle_for(frame)
            if vehicle is None:
                return self._reply(session, "eta_location", "which_vehicle")
            point = Waypoint(0.0, 0.0) if target == "origin" else None
            if point is None:
                return self._reply(
                    session, "eta_location", "unreachable",
                    target=target, reason="I do not know where that is",
                )
            result = self.store.eta_to(vehicle, point)
            mentions.append((target, "location"))
        mentions.append((vehicle, "vehicle"))
        if result.kind == "completed":
            return self._reply(
                session, "eta_location", "completed", mentions=mentions,
                target=result.target_label,
                time=fmt_time(result.finish_t or 0.0, session.prefs),
            )
        if result.kind == "no_data":
            return self._reply(
                session, "eta_location", "no_data", mentions=mentions, vehicle=vehicle,
            )
        if result.kind == "unreachable":
            return self._reply(
                session, "eta_location", "unreachable", mentions=mentions,
                target=result.target_label, reason=result.reason,
            )
        return self._reply(
            session, "eta_location", "eta", mentions=mentions,
            vehicle=vehicle, target=result.target_label,
            duration=fmt_duration(result.seconds),
            speed=fmt_speed(result.speed_mps, session.prefs),
        )

    def _do_etc_objective(self, frame: IntentFrame, session: SessionState) -> Reply:
        slot = frame.slot_of_type("objective")
        name = self.store.plan.objective(str(slot.value)).name
        result = self.store.etc_of(name)
        mentions = [(name, "objective")]
        if result.kind == "completed":
            return self._reply(
                session, "etc_objective", "completed", mentions=mentions,
                objective=name, time=fmt_time(result.finish_t or 0.0, session.prefs),
            )
        if result.kind == "no_data":
            return self._reply(
                session, "etc_objective", "no_data", mentions=mentions, objective=name,
            )
        if result.kind == "unreachable":
            return self._reply(
                session, "etc_objective", "unreachable", mentions=mentions,
                objective=name, reason=result.reason,
            )
        eta_abs = fmt_time(self.clock() + (result.seconds or 0.0), session.prefs)
        return self._reply(
            session, "etc_objective", "etc", mentions=mentions,
            objective=name, duration=fmt_duration(result.seconds),
            time=eta_abs, speed=fmt_speed(result.speed_mps, session.prefs),
        )

    def _do_objective_location(self, frame: IntentFrame, session: SessionState) -> Reply:
        slot = frame.slot_of_type("objective")
        obj = self.store.plan.objective(str(slot.value))
        status = self.store.objective_status(obj.name)
        cx = sum(w.x for w in obj.waypoints) / len(obj.waypoints)
        cy = sum(w.y for w in obj.waypoints) / len(obj.waypoints)
        return self._reply(
            session, "objective_location", "ok",
            mentions=[(obj.name, "objective")],
            objective=obj.name, kind=obj.kind.value,
            position=fmt_position(cx, cy), status=status.status.value,
        )

    def _do_objective_finish_time(self, frame: IntentFrame, session: SessionState) -> Reply:
        slot = frame.slot_of_type("objective")
        obj = self.store.plan.objective(str(slot.value))
        status = self.store.objective_status(obj.name)
        mentions = [(obj.name, "objective")]
        if status.status is ObjectiveState.COMPLETED and status.finish_t is not None:
            return self._reply(
                session, "objective_finish_time", "done", mentions=mentions,
                objective=obj.name, time=fmt_time(status.finish_t, session.prefs),
            )
        return self._reply(
            session, "objective_finish_time", "not_done", mentions=mentions,
            objective=obj.name,
        )

    def _do_past_activities(self, frame: IntentFrame, session: SessionState) -> Reply:
        vehicle_slot = frame.slot_of_type("vehicle")
        duration_slot = frame.slot_of_type("duration")
        since = None
        if duration_slot is not None:
            since = max(0.0, self.clock() - float(duration_slot.value))
        vehicle = str(vehicle_slot.value) if vehicle_slot else None
        events = self.store.history(vehicle_id=vehicle, since=since)
        if not events:
            return self._reply(session, "past_activities", "none")
        shown = events[-HISTORY_LIMIT:]
        lines = "\n".join(self._describe_event(e, session.prefs) for e in shown)
        mentions = []
        for e in shown:
            if e.vehicle_id:
                mentions.append((e.vehicle_id, "vehicle"))
            if e.subject and self.store.plan.has_objective(e.subject):
                mentions.append((e.subject, "objective"))
        return self._reply(
            session, "past_activities", "some", mentions=mentions,
            count=len(events), events=lines,
        )

    def _do_progress(self, frame: IntentFrame, session: SessionState) -> Reply:
        p = self.store.mission_progress()
        return self._reply(
            session, "progress", "ok",
            pct=f"{p['pct']:.0f}", completed=p["completed"], total=p["total"],
        )

    def _do_fault_diagnosis(self, frame: IntentFrame, session: SessionState) -> Reply:
        vehicle = self._vehicle_for(frame)
        if vehicle is None:
            return self._reply(session, "fault_diagnosis", "which_vehicle")
        faults = self.store.fault_summary(vehicle)
        mentions = [(vehicle, "vehicle")]
        if not faults:
            return self._reply(
                session, "fault_diagnosis", "none", mentions=mentions, vehicle=vehicle,
            )
        lines = "\n".join(
            f"[{fmt_time(f.t, session.prefs)}] {f.code}"
            + (f" — {f.detail}" if f.detail else "")
            + (" (acknowledged)" if f.acknowledged else "")
            for f in faults
        )
        return self._reply(
            session, "fault_diagnosis", "some", mentions=mentions,
            vehicle=vehicle, count=len(faults), faults=lines,
        )

    def _do_create_reminder(self, frame: IntentFrame, session: SessionState) -> Reply:
        duration_slot = frame.slot_of_type("duration")
        objective_slot = frame.slot_of_type("objective")
        tokens = set(normalize(frame.raw))
        note = _reminder_note(frame.note)
        if duration_slot is not None:
            fire_at = self.clock() + float(duration_slot.value)
            self.engine.add_time_reminder(session.session_id, fire_at, note)
            return self._reply(
                session, "create_reminder", "time_set",
                time=fmt_time(fire_at, session.prefs),
                note_part=f' ("{note}")' if note else "",
            )
        if objective_slot is not None and tokens & COMPLETION_WORDS:
            name = self.store.plan.objective(str(objective_slot.value)).name
            self.engine.add_event_reminder(
                session.session_id, EventType.OBJECTIVE_COMPLETED, name, note
            )
            return self._reply(
                session, "create_reminder", "event_set",
                mentions=[(name, "objective")], objective=name,
            )
        if "mission" in tokens and tokens & COMPLETION_WORDS:
            self.engine.add_event_reminder(
                session.session_id, EventType.MISSION_COMPLETED, "", note
            )
            return self._reply(session, "create_reminder", "mission_set")
        return self._reply(session, "create_reminder", "need_trigger")

    def _do_set_preference(self, frame: IntentFrame, session: SessionState) -> Reply:
        tokens = normalize(frame.raw)
        joined = " ".join(tokens)
        try:
            if "12h" in tokens or "12 hour" in joined:
                session.prefs.set("time_format", "12h")
                return self._reply(session, "set_preference", "time_set", value="12-hour")
            if "24h" in tokens or "24 hour" in joined:
                session.prefs.set("time_format", "24h")
                return self._reply(session, "set_preference", "time_set", value="24-hour")
            if "nautical" in tokens or "knots" in tokens:
                session.prefs.set("units", "nautical")
                return self._reply(session, "set_preference", "units_set", value="nautical (knots)")
            if "metric" in tokens:
                session.prefs.set("units", "metric")
                return self._reply(session, "set_preference", "units_set", value="metric (m/s)")
            for level in ("critical", "warning", "info"):
                if level in tokens:
                    session.prefs.set("alert_min_severity", level)
                    return self._reply(session, "set_preference", "alert_set", value=level)
        except PreferenceError as e:
            logger.warning("preference rejected: %s", e)
        return self._reply(session, "set_preference", "unknown_option")

    def _do_acknowledge_alert(self, frame: IntentFrame, session: SessionState) -> Reply:
        number_slot = frame.slot_of_type("number")
        alert_id = int(number_slot.value) if number_slot is not None else None
        status, alert = self.engine.acknowledge(
            session.session_id, alert_id, normalize(frame.raw)
        )
        if status == "acked":
            return self._reply(
                session, "acknowledge_alert", "acked",
                alert_id=alert.alert_id, text=alert.text,
            )
        if status == "already":
            return self._reply(
                session, "acknowledge_alert", "already", alert_id=alert.alert_id,
            )
        if status == "none_pinned":
            return self._reply(session, "acknowledge_alert", "none_pinned")
        return self._reply(session, "acknowledge_alert", "unknown")

    def _do_help(self, frame: IntentFrame, session: SessionState) -> Reply:
        return self._reply(session, "help", "ok")

    def _do_unknown(self, frame: IntentFrame, session: SessionState) -> Reply:
        return self._reply(session, UNKNOWN, "ok")

    def _do_clarify(self, frame: IntentFrame, session: SessionState) -> Reply:
        shape = frame.missing if frame.missing in ("vehicle", "objective", "location") else "generic"
        reply = self._reply(session, CLARIFY, shape)
        reply.kind = "clarification"
        return reply
