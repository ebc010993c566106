"""Wires simulator, store, NLU, dialogue and alerting into one runtime.

The simulation tick is the single writer: it ingests emissions into the
store, routes events through the alert engine, and fans alert/reminder
messages and track updates out to sessions.  Chat turns only read mission
state, so they can run concurrently with the ticker.
"""

from __future__ import annotations

import logging
import threading
import time
from typing import Optional

from ..alerts.engine import AlertEngine, AlertPolicy, Reminder
from ..dialogue.processor import DialogueProcessor
from ..dialogue.templates import TemplateSet
from ..mission.store import MissionStore
from ..mission.types import MissionEvent, MissionPlan, VehicleState
from ..nlu.lexicon import Lexicon
from ..nlu.parser import IntentParser
from ..nlu.rules import Rule, reserved_literals
from ..sim.engine import Simulator
from ..sim.scenario import Scenario
from .messages import ChatMessage, TrackUpdate
from .sessions import Session, SessionManager

logger = logging.getLogger(__name__)


class MissionRuntime:
    def __init__(
        self,
        plan: MissionPlan,
        scenario: Optional[Scenario],
        rules: list[Rule],
        templates: TemplateSet,
        static_entries: list[tuple[str, str, str]],
        policy: AlertPolicy,
        journal_path: Optional[str] = None,
    ):
        self.sim = Simulator(plan, scenario)
        self.store = MissionStore(plan, journal_path=journal_path)
        self.lexicon = Lexicon.build(plan, static_entries, reserved_literals(rules))
        self.parser = IntentParser(rules, self.lexicon)
        self.engine = AlertEngine(policy, self.store)
        self.sessions = SessionManager()
        self.processor = DialogueProcessor(self.store, templates, self.engine, clock=self.now)
        self._tick_lock = threading.Lock()
        self._ticker: Optional[threading.Thread] = None
        self._stop = threading.Event()

    # -- time -------------------------------------------------------------------

    def now(self) -> float:
        return self.sim.t

    # -- simulation driving -------------------------------------------------------

    def advance_ticks(self, n: int = 1) -> None:
        with self._tick_lock:
            for _ in range(n):
                if self.sim.mission_complete:
                    break
                self._apply_emissions(self.sim.step())
                self._fire_time_reminders()

    def advance_seconds(self, seconds: float) -> None:
        if seconds <= 0:
            return
        self.advance_ticks(int(round(seconds / self.sim.scenario.tick_dt)))

    def _apply_emissions(self, emissions) -> None:
        states: list[VehicleState] = []
        for emission in emissions:
            if isinstance(emission, MissionEvent):
                self.store.ingest_event(emission)
                self._route_event(emission)
            else:
                self.store.ingest_state(emission)
                states.append(emission)
        if states:
            self._broadcast_tracks(states)

    def _route_event(self, event: MissionEvent) -> None:
        sessions = self.sessions.alive()
        outcome = self.engine.on_event(event, sessions, now=event.t)
        by_id = {s.session_id: s for s in sessions}
        for alert in outcome.alerts:
            session = by_id.get(alert.session_id)
            if session is not None:
                session.append_message(
                    t=alert.t, author="system", text=alert.text, kind="alert",
                    severity=alert.severity, pinned=alert.pinned, alert_id=alert.alert_id,
                )
        for reminder in outcome.reminders:
            self._deliver_reminder(reminder)

    def _fire_time_reminders(self) -> None:
        for reminder in self.engine.tick(self.now()):
            self._deliver_reminder(reminder)

    def _deliver_reminder(self, reminder: Reminder) -> None:
        try:
            session = self.sessions.get(reminder.session_id)
        except KeyError:
            logger.info("reminder %d owner session gone", reminder.reminder_id)
            return
        session.append_message(
            t=self.now(), author="system", text=reminder.message_text(), kind="reminder",
        )

    def _broadcast_tracks(self, states: list[VehicleState]) -> None:
        progress = self.store.mission_progress()["pct"]
        sessions = self.sessions.alive()
        if not sessions:
            return
        for state in states:
            for session in sessions:
                pinned_ids = [a.alert_id for a in self.engine.pinned(session.session_id)]
                session.push_track(
                    TrackUpdate(
                        t=state.t, vehicle_id=state.vehicle_id, x=state.x, y=state.y,
                        heading=state.heading, battery_pct=state.battery_pct,
                        progress_pct=progress, pinned_alert_ids=pinned_ids,
                    )
                )

    # -- background ticker ---------------------------------------------------------

    def start_ticker(self, speed: float) -> None:
        """Advance the mission in wall time, `speed` sim-seconds per second."""
        if speed <= 0:
            return
        interval = self.sim.scenario.tick_dt / speed

        def loop():
            while not self._stop.is_set() and not self.sim.mission_complete:
                started = time.monotonic()
                self.advance_ticks(1)
                elapsed = time.monotonic() - started
                self._stop.wait(max(0.0, interval - elapsed))

        self._ticker = threading.Thread(target=loop, name="miriam-ticker", daemon=True)
        self._ticker.start()

    def stop(self) -> None:
        self._stop.set()
        if self._ticker is not None:
            self._ticker.join(timeout=2.0)

    # -- chat surface ---------------------------------------------------------------

    def greeting_text(self) -> str:
        plan = self.store.plan
        vehicles = ", ".join(v.vehicle_id for v in plan.vehicles)
        objectives = ", ".join(o.name for o in plan.objectives)
        return (
            f"Mission {plan.plan_id} loaded — vehicle(s): {vehicles}; "
            f"objectives: {objectives}. Say 'help' for what you can ask."
        )

    def open_session(self) -> tuple[Session, ChatMessage]:
        session = self.sessions.open(now_t=self.now())
        for v in self.store.plan.vehicles:
            session.ctx.push(v.vehicle_id, "vehicle")
        for o in self.store.plan.objectives:
            session.ctx.push(o.name, "objective")
        greeting = session.append_message(
            t=self.now(), author="system", text=self.greeting_text(),
        )
        return session, greeting

    def post_message(self, session_id: str, text: str) -> ChatMessage:
        session = self.sessions.get(session_id)
        with session.turn_lock:
            session.append_message(t=self.now(), author="user", text=text)
            frame = self.parser.parse(text, session.ctx)
            reply = self.processor.handle(frame, session.state)
            for entity, entity_type in reply.mentions:
                session.ctx.push(entity, entity_type)
            return session.append_message(
                t=self.now(), author="system", text=reply.text, kind=reply.kind,
            )
