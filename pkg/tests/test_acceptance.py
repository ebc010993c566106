"""Acceptance suite: one test per release criterion, one PASS line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
report lines.
"""

import io
import json
import math
import random
import string
import subprocess
import sys
import threading
import time
from pathlib import Path

import httpx
import pytest

from miriam import defaults
from miriam.alerts.engine import AlertPolicy
from miriam.mission.plan import load_plan, parse_stream_line
from miriam.mission.store import MissionStore
from miriam.mission.types import (
    EventType,
    MissionEvent,
    Objective,
    ObjectiveKind,
    VehicleSpec,
    VehicleState,
    Waypoint,
)
from miriam.nlu import (
    ANAPHORA,
    ELLIPSIS,
    EXPLICIT,
    UNKNOWN,
    CLARIFY,
    DialogueContext,
    IntentParser,
    Lexicon,
    reserved_literals,
)
from miriam.service.runtime import MissionRuntime
from miriam.sim.engine import Simulator, run as sim_run
from miriam.sim.scenario import Scenario, Trigger, load_scenario

from conftest import demo_plan_text, demo_scenario_text, make_plan
from server_util import free_port, read_sse_events

CRUISE = 1.5
TELEMETRY_EVERY = 5


def report(name: str) -> None:
    print(f"ACCEPTANCE PASS: {name}")


def demo_parser() -> IntentParser:
    plan = load_plan(demo_plan_text())
    rules = defaults.load_rules()
    lexicon = Lexicon.build(plan, defaults.load_static_entries(), reserved_literals(rules))
    return IntentParser(rules, lexicon)


def demo_runtime(scenario: Scenario | None = None) -> MissionRuntime:
    plan = load_plan(demo_plan_text())
    rules = defaults.load_rules()
    return MissionRuntime(
        plan=plan,
        scenario=scenario if scenario is not None else Scenario(),
        rules=rules,
        templates=defaults.load_templates(),
        static_entries=defaults.load_static_entries(),
        policy=defaults.load_alert_policy(),
    )


def script_path(name: str) -> str:
    from importlib import resources

    return str(resources.files("miriam") / "demo" / name)


# -- 1. paper dialogue reproduction ------------------------------------------------

def test_paper_dialogue_reproduction():
    parser = demo_parser()
    ctx = DialogueContext()
    started = time.perf_counter()
    f1 = parser.parse("Where is Survey0?", ctx)
    f2 = parser.parse("What time did it finish?", ctx)
    f3 = parser.parse("What about Survey1?", ctx)
    elapsed = time.perf_counter() - started

    assert f1.intent == "objective_location"
    assert f1.slot_of_type("objective").value == "Survey0"
    assert f1.slot_of_type("objective").source == EXPLICIT

    assert f2.intent == "objective_finish_time"
    assert f2.slot_of_type("objective").value == "Survey0"
    assert f2.slot_of_type("objective").source == ANAPHORA

    assert f3.intent == "objective_location"
    assert f3.slot_of_type("objective").value == "Survey1"
    assert f3.slot_of_type("objective").source == ELLIPSIS

    assert elapsed < 1.0
    report(f"paper dialogue reproduction (3 turns in {elapsed * 1000:.0f} ms)")


# -- 2. dynamic lexicon --------------------------------------------------------------

def test_dynamic_lexicon_50_random_names():
    rules = defaults.load_rules()
    reserved = reserved_literals(rules)
    static_surfaces = {s for s, _, _ in defaults.load_static_entries()}
    rng = random.Random(20240809)
    names: list[str] = []
    while len(names) < 50:
        name = "".join(rng.choice(string.ascii_lowercase + string.digits) for _ in range(8))
        if name in reserved or name in static_surfaces or name in names or name.isdigit():
            continue
        names.append(name)

    vehicles = [VehicleSpec(n, cruise_speed=1.0) for n in names[:25]]
    objectives = [
        Objective(n, ObjectiveKind.SURVEY, names[0], [Waypoint(i, 0)])
        for i, n in enumerate(names[25:])
    ]
    plan = make_plan(vehicles=vehicles, objectives=objectives)
    parser = IntentParser(rules, Lexicon.build(plan, defaults.load_static_entries(), reserved))

    hits = 0
    for name in names:
        frame = parser.parse(f"where is {name}", DialogueContext())
        assert frame.intent in ("objective_location", "vehicle_location"), (name, frame.intent)
        slot = frame.entity_slots()[0]
        assert slot.source == EXPLICIT and slot.value == name
        hits += 1
    assert hits == 50
    report("dynamic lexicon: 50/50 generated names parse with explicit slots")


# -- 3. intent corpus ------------------------------------------------------------------

def test_intent_corpus_accuracy():
    parser = demo_parser()
    rows = []
    for line in defaults.corpus_text().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        utterance, intent, kind = line.split("\t")
        rows.append((utterance, intent, kind))

    assert len(rows) >= 60
    per_intent: dict[str, int] = {}
    for _, intent, _ in rows:
        per_intent[intent] = per_intent.get(intent, 0) + 1
    assert all(n >= 4 for n in per_intent.values()), per_intent
    for required in ("vehicle_status", "plan_summary", "current_objective",
                     "eta_location", "past_activities", "progress",
                     "fault_diagnosis", "etc_objective"):
        assert required in per_intent

    total = canonical_total = correct = canonical_correct = 0
    misses = []
    for utterance, expected, kind in rows:
        frame = parser.parse(utterance, DialogueContext())
        ok = frame.intent == expected
        total += 1
        correct += ok
        if kind == "canonical":
            canonical_total += 1
            canonical_correct += ok
        if not ok:
            misses.append((utterance, expected, frame.intent))

    accuracy = correct / total
    canonical_accuracy = canonical_correct / canonical_total
    assert canonical_accuracy == 1.0, f"canonical misses: {misses}"
    assert accuracy >= 0.95, f"misses: {misses}"
    report(
        f"intent corpus: {total} utterances, accuracy {accuracy:.1%}, "
        f"canonical {canonical_accuracy:.1%}"
    )


# -- 4. ETA oracle -----------------------------------------------------------------------

def test_eta_oracle_constant_speed():
    plan = load_plan(demo_plan_text())
    scenario = Scenario(telemetry_every=TELEMETRY_EVERY)

    # independent oracle: tick-accurate arrival time from leg arithmetic
    # (each leg takes ceil(length / step) ticks; arrival ends its tick)
    legs = [600.0, 100.0, 600.0, 100.0, 600.0, math.hypot(200, 200)]
    step = CRUISE * scenario.tick_dt
    oracle_arrival = sum(math.ceil(leg / step - 1e-12) for leg in legs)

    store = MissionStore(load_plan(demo_plan_text()))
    sink = io.StringIO()
    sim_run(plan, scenario, sink)
    records = [parse_stream_line(l) for l in sink.getvalue().splitlines()]

    etas = []
    arrived_t = None
    for record in records:
        if isinstance(record, MissionEvent):
            store.ingest_event(record)
            continue
        store.ingest_state(record)
        if arrived_t is None and math.hypot(record.x - 800, record.y - 0) < 1e-9:
            arrived_t = record.t
        result = store.eta_to("auv1", "Survey1")
        if result.kind == "eta":
            etas.append((record.t, result.seconds))

    tolerance = 2 * TELEMETRY_EVERY * scenario.tick_dt
    for t, eta in etas:
        if t <= oracle_arrival:
            predicted = t + eta
            assert abs(predicted - oracle_arrival) <= tolerance, (t, predicted, oracle_arrival)

    series = [eta for _, eta in etas]
    assert all(a >= b - 1e-9 for a, b in zip(series, series[1:])), "ETA not non-increasing"

    # reaches zero within one telemetry interval of arrival
    post = [eta for t, eta in etas if t >= oracle_arrival]
    assert post and post[0] <= TELEMETRY_EVERY * scenario.tick_dt
    report(
        f"ETA oracle: |predicted-actual| <= {tolerance:.0f} s at all "
        f"{len(etas)} samples, non-increasing"
    )


# -- 5. progress oracle ---------------------------------------------------------------------

def test_progress_oracle_end_and_detour():
    plan = load_plan(demo_plan_text())
    scenario = load_scenario(demo_scenario_text(), plan)
    store = MissionStore(load_plan(demo_plan_text()))

    # analytic detour: fault at 200 halves speed, obstacle at t=400
    # finds the vehicle at x = 200*1.5 + 200*0.75 = 450 on the 600 m leg
    px = 200 * 1.5 + 200 * 0.75
    b = (600.0, 0.0)
    d1 = (px + (b[0] - px) / 3.0, 50.0)
    d2 = (px + 2 * (b[0] - px) / 3.0, 50.0)
    a = (0.0, 0.0)
    analytic_growth = (
        math.dist(a, d1) + math.dist(d1, d2) + math.dist(d2, b) - math.dist(a, b)
    )

    sink = io.StringIO()
    sim_run(plan, scenario, sink)

    total_before_detour = None
    growth = None
    for line in sink.getvalue().splitlines():
        record = parse_stream_line(line)
        if isinstance(record, MissionEvent):
            if record.type is EventType.OBJECTIVE_CHANGED and record.subject == "Survey0":
                total_before_detour = store.mission_progress()["total_path_m"]
            store.ingest_event(record)
            if total_before_detour is not None and growth is None:
                growth = store.mission_progress()["total_path_m"] - total_before_detour
        else:
            store.ingest_state(record)

    assert growth is not None
    assert abs(growth - analytic_growth) <= 0.1, (growth, analytic_growth)

    final = store.mission_progress()
    assert abs(final["pct"] - 100.0) <= 0.1
    assert final["completed"] == final["total"] == 3  # Survey0, Survey1, Inspect1
    report(
        f"progress oracle: end pct {final['pct']:.2f}, detour growth "
        f"{growth:.2f} m vs analytic {analytic_growth:.2f} m"
    )


# -- 6. mixed initiative ---------------------------------------------------------------------

def test_mixed_initiative_alerting():
    scenario = Scenario(script=[Trigger(t=200.0, kind="fault", vehicle="auv1", code="THRUSTER_1")])
    rt = demo_runtime(scenario)
    session, _ = rt.open_session()  # idle session, never posts

    rt.advance_seconds(201)  # one tick past the fault
    alerts = [m for m in session.history() if m.kind == "alert" and m.severity == "critical"]
    assert len(alerts) == 1
    assert alerts[0].pinned and alerts[0].t == 200.0
    assert rt.now() <= 201.0 + 1e-9

    # two identical battery warnings inside the 60 s window -> one alert
    warn = lambda t: MissionEvent(
        t=t, vehicle_id="auv1", type=EventType.BATTERY_WARNING,
        subject="30%", detail="battery at 29.9%",
    )
    rt._apply_emissions([warn(500.0)])
    rt._apply_emissions([warn(510.0)])
    battery_alerts = [m for m in session.history()
                      if m.kind == "alert" and "Battery" in m.text]
    assert len(battery_alerts) == 1

    # acknowledging through chat empties the pinned set
    assert len(rt.engine.pinned(session.session_id)) == 1
    pinned_id = rt.engine.pinned(session.session_id)[0].alert_id
    reply = rt.post_message(session.session_id, f"acknowledge alert {pinned_id}")
    assert "Acknowledged" in reply.text
    assert rt.engine.pinned(session.session_id) == []
    report("mixed initiative: pinned critical within one tick, dupes throttled, ack unpins")


# -- 7. reminder semantics --------------------------------------------------------------------

def test_reminder_semantics():
    rt = demo_runtime(Scenario())
    session, _ = rt.open_session()
    tick = rt.sim.scenario.tick_dt

    rt.advance_seconds(10)
    at_request = rt.now()
    rt.post_message(session.session_id, "remind me in 5 minutes")
    rt.post_message(session.session_id, "remind me when Survey0 is complete")

    rt.advance_seconds(400)
    reminders = [m for m in session.history() if m.kind == "reminder"]
    assert len(reminders) == 1, reminders
    fire_err = reminders[0].t - (at_request + 300.0)
    assert 0.0 <= fire_err <= tick, fire_err

    # run until Survey0 completes; the event reminder fires exactly once
    while not rt.sim.mission_complete and rt.now() < 4000:
        rt.advance_ticks(50)
        done = [m for m in session.history() if m.kind == "reminder" and "Survey0" in m.text]
        if done:
            break
    survey_reminders = [m for m in session.history()
                        if m.kind == "reminder" and "Survey0" in m.text]
    assert len(survey_reminders) == 1
    completion = [e for e in rt.store.history(type="objective_completed", objective="Survey0")]
    assert completion and abs(survey_reminders[0].t - completion[0].t) <= 50 * tick

    rt.advance_seconds(200)  # no re-fire later
    assert len([m for m in session.history() if m.kind == "reminder" and "Survey0" in m.text]) == 1
    report(f"reminder semantics: timer fired {fire_err:.1f} s late (<= 1 tick), event fired once")


# -- 8. determinism + e2e budget ---------------------------------------------------------------

def _sim_cmd() -> list[str]:
    exe = Path(sys.executable).parent / "sim"
    if exe.exists():
        return [str(exe)]
    return [sys.executable, "-m", "miriam.sim"]


def test_sim_cli_byte_identical(tmp_path):
    outs = []
    for i in range(2):
        out = tmp_path / f"stream{i}.ndjson"
        result = subprocess.run(
            _sim_cmd() + ["run", "--plan", script_path("plan.json"),
                          "--scenario", script_path("scenario.json"),
                          "--out", str(out)],
            capture_output=True, text=True, timeout=120,
        )
        assert result.returncode == 0, result.stderr
        outs.append(out.read_bytes())
    assert outs[0] == outs[1] and len(outs[0]) > 10000
    report(f"determinism: two sim runs byte-identical ({len(outs[0])} bytes)")


def test_end_to_end_under_30s(tmp_path):
    started = time.perf_counter()
    port = free_port()
    server = subprocess.Popen(
        [sys.executable, "-m", "miriam.cli", "serve",
         "--plan", script_path("plan.json"), "--scenario", script_path("scenario.json"),
         "--port", str(port), "--speed", "100"],
        stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
    )
    try:
        base = f"http://127.0.0.1:{port}"
        with httpx.Client(base_url=base, timeout=20) as client:
            for _ in range(200):
                try:
                    client.get("/api/mission/plan")
                    break
                except httpx.TransportError:
                    time.sleep(0.1)
            sid = client.post("/api/sessions").json()["session_id"]
            reply = client.post(f"/api/sessions/{sid}/messages",
                                json={"text": "where is Survey0"}).json()
            assert "Survey0" in reply["text"]
            # fault at sim t=200 arrives within ~2 wall seconds at speed 100
            saw_critical = False
            with client.stream("GET", f"/api/sessions/{sid}/stream") as r:
                lines = r.iter_lines()
                deadline = time.perf_counter() + 15
                while time.perf_counter() < deadline and not saw_critical:
                    batch = read_sse_events(lines, count=1, want={"chat"})
                    if not batch:
                        break
                    if json.loads(batch[0]["data"]).get("severity") == "critical":
                        saw_critical = True
            assert saw_critical, "no critical alert on stream"
            progress = client.get("/api/mission/progress").json()
            assert progress["pct"] > 0
    finally:
        server.terminate()
        server.wait(timeout=10)
    elapsed = time.perf_counter() - started
    assert elapsed < 30.0
    report(f"end-to-end serve+client scenario in {elapsed:.1f} s (< 30 s)")


# -- 9. REPL / HTTP parity ------------------------------------------------------------------------

PARITY_SCRIPT = [
    "where is Survey0",
    "what time did it finish",
    "what about Survey1",
    "what is the status of auv1",
    "when will auv1 get to Survey1",
    "what is the mission progress",
    "are there any faults",
    "remind me in 5 minutes",
    "set units to nautical",
    "what is auv1 doing",
]


def test_repl_http_parity():
    repl = subprocess.run(
        [sys.executable, "-m", "miriam.cli", "repl",
         "--plan", script_path("plan.json"), "--speed", "0", "--prerun", "300"],
        input="\n".join(PARITY_SCRIPT) + "\n",
        capture_output=True, text=True, timeout=120,
    )
    assert repl.returncode == 0, repl.stderr
    repl_replies = [line[len("miriam> "):] for line in repl.stdout.splitlines()
                    if line.startswith("miriam> ")][1:]  # drop greeting
    assert len(repl_replies) == len(PARITY_SCRIPT)

    port = free_port()
    server = subprocess.Popen(
        [sys.executable, "-m", "miriam.cli", "serve",
         "--plan", script_path("plan.json"), "--port", str(port),
         "--speed", "0", "--prerun", "300"],
        stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL,
    )
    try:
        base = f"http://127.0.0.1:{port}"
        with httpx.Client(base_url=base, timeout=20) as client:
            for _ in range(200):
                try:
                    client.get("/api/mission/plan")
                    break
                except httpx.TransportError:
                    time.sleep(0.1)
            sid = client.post("/api/sessions").json()["session_id"]
            http_replies = [
                client.post(f"/api/sessions/{sid}/messages", json={"text": u}).json()["text"]
                for u in PARITY_SCRIPT
            ]
    finally:
        server.terminate()
        server.wait(timeout=10)

    assert repl_replies == http_replies
    report(f"REPL/HTTP parity: {len(PARITY_SCRIPT)} turns, identical reply texts")
