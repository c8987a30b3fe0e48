"""Acceptance suite.

Each test enforces one acceptance criterion at its stated tolerance and
prints one PASS line on success (run with ``pytest -v -s`` to see them
as they go). Criteria A1-A7 run without the browser console; A8's
server half is exercised over a real websocket by an automated
operator.
"""

import dataclasses
import itertools
import json
import math
import random
import re
import threading
import time
from decimal import Decimal

import numpy as np
import pytest

from conftest import as_script, build_gate_script, crossing_time
from gestureswarm.agent import heading_error
from gestureswarm.cli import main as cli_main
from gestureswarm.classifier import CentroidClassifier
from gestureswarm.config import setup_from_dict
from gestureswarm.core import CommandKind, Gesture, Pose, RobotParams
from gestureswarm.debounce import GestureEvent
from gestureswarm.engine import integrate, run_scenario, tick_label
from gestureswarm.grammar import parse_sequence
from gestureswarm.images import BinaryImage, GrayImage, augment, preprocess_frame
from gestureswarm.silhouettes import sample_set


def announce(line: str) -> None:
    print(f"\n{line}")


WALL_BAND = (1.45, 1.55)   # testbed 3 wall extent along x


def test_a1_testbed3_end_to_end(testbed3_setup):
    start = time.perf_counter()
    entries = build_gate_script(testbed3_setup, contract_at=0.6, expand_at=1.6)
    report = run_scenario(testbed3_setup, as_script(entries), max_time=60.0)
    elapsed = time.perf_counter() - start

    assert report.completed, "swarm must reach the goal"
    assert report.collisions == [], "traversal must be collision-free"

    # outer robots hold the contracted lane while inside the opening
    in_band = {0: [], 2: []}
    for tick, rid, x, y, phi, halted in report.trajectory:
        if rid in in_band and WALL_BAND[0] <= x <= WALL_BAND[1]:
            in_band[rid].append(abs(y))
    for rid, ys in in_band.items():
        assert ys, f"robot {rid} never traversed the opening"
        assert all(abs(v - 0.35) <= 0.02 for v in ys), f"robot {rid} off-lane in the gap"

    # formation restored at the goal
    for rid in (0, 2):
        assert abs(abs(report.final_poses[rid].y) - 0.60) <= 0.02
    goal = testbed3_setup.swarm.x_goal
    tol = testbed3_setup.params.arrival_tol
    for pose in report.final_poses:
        assert abs(pose.x - goal) <= tol

    assert elapsed < 5.0, f"A1 took {elapsed:.2f}s of wall clock"
    announce(
        f"A1 PASS - testbed 3 complete at t={report.completion_time}s, no collisions, "
        f"gap lane 0.35+/-0.02, goal lane 0.60+/-0.02, {elapsed:.2f}s wall"
    )


def test_a2_testbed2_concatenated_command():
    setup = setup_from_dict({"testbed": 2})
    script = as_script([
        (0.0, "Peace"), (1.0, "Palm"), (2.0, "Fist"), (3.0, "C"),
        (4.0, "Fist"), (5.0, "C"), (6.0, "Peace"),
    ])
    # stop short of the wall at x=4: the criterion measures the contraction,
    # not the traversal
    report = run_scenario(setup, script, max_time=20.0)
    steps = [
        r for r in report.commands if r.command.kind is CommandKind.COHESION_STEP
    ]
    assert len(steps) == 2
    assert all(r.command.beta == 0 for r in steps)
    assert report.collisions == []

    initial = 1.5
    for rid in (0, 2):
        contraction = initial - abs(report.final_poses[rid].y)
        assert abs(contraction - 0.50) <= 0.02
    announce(
        "A2 PASS - one Palm,Fist,C,Fist,C,Peace bracket issued exactly two "
        "CohesionStep(beta=0); outer lanes contracted by 0.50+/-0.02 m"
    )


def test_a3_latency_equivalence():
    base = setup_from_dict({"testbed": 3, "latency": 0.5})
    physical = dataclasses.replace(
        base, params=dataclasses.replace(base.params, v0=base.params.v0 * 0.5)
    )
    entries = build_gate_script(physical, contract_at=0.6, expand_at=1.6)
    delayed = run_scenario(physical, as_script(entries), max_time=120.0)

    assert delayed.completed
    assert delayed.collisions == []
    assert delayed.commands
    for rec in delayed.commands:
        delta = Decimal(tick_label(rec.delivered_tick, delayed.dt)) - Decimal(
            tick_label(rec.issued_tick, delayed.dt)
        )
        assert delta == Decimal("0.5"), f"delivery delta {delta} != 0.5"

    instant = run_scenario(
        dataclasses.replace(physical, latency=0.0), as_script(entries), max_time=120.0
    )
    assert len(instant.commands) == len(delayed.commands)
    for a, b in zip(instant.commands, delayed.commands):
        assert a.command == b.command and a.issued_tick == b.issued_tick
        shift = Decimal(tick_label(b.delivered_tick, delayed.dt)) - Decimal(
            tick_label(a.delivered_tick, instant.dt)
        )
        assert shift == Decimal("0.5")
    announce(
        "A3 PASS - every command delivered exactly 0.5s after issue at latency "
        "0.5; same-script delivery times shift by exactly the latency; physical "
        "preset run completes without collision"
    )


BRACKET_PATTERN = re.compile(r"^(S(C*R)?)*$")
LETTER = {CommandKind.STOP: "S", CommandKind.COHESION_STEP: "C", CommandKind.RESUME: "R"}


def test_a4_grammar_exhaustive_and_none_invariance():
    start = time.perf_counter()
    gestures = list(Gesture)
    checked = 0
    for length in range(6):
        for seq in itertools.product(gestures, repeat=length):
            events = [GestureEvent(g, float(i)) for i, g in enumerate(seq)]
            word = "".join(LETTER[c.kind] for c in parse_sequence(events))
            assert BRACKET_PATTERN.match(word), f"{[g.value for g in seq]} -> {word}"
            checked += 1
    assert checked == sum(7**k for k in range(6))   # 19608 sequences, 7^5 of them full length

    rng = random.Random(20260810)
    for _ in range(1000):
        base = [rng.choice(gestures) for _ in range(rng.randint(0, 12))]
        base_events = [GestureEvent(g, float(i)) for i, g in enumerate(base)]
        expected = parse_sequence(base_events)
        padded = list(base)
        for _ in range(rng.randint(1, 5)):
            padded.insert(rng.randint(0, len(padded)), Gesture.NONE)
        padded_events = [GestureEvent(g, float(i)) for i, g in enumerate(padded)]
        assert parse_sequence(padded_events) == expected
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0, f"A4 took {elapsed:.2f}s"
    announce(
        f"A4 PASS - {checked} exhaustive sequences match S(C*R)? bracketing and "
        f"1000 randomized None-insertions are invariant ({elapsed:.2f}s)"
    )


def test_a5_controller_convergence():
    params = RobotParams(v0=0.15, kp=2.0)
    dt = 0.05
    target = (1000.0, 0.0)
    rng = random.Random(5)
    for _ in range(100):
        pose = Pose(0.0, 0.0, rng.uniform(-math.pi + 1e-6, math.pi))
        for _ in range(int(10.0 / dt)):
            e = heading_error(pose, target)
            pose = integrate(pose, params.v0, params.kp * e, dt)
        assert abs(heading_error(pose, target)) < 0.01

    rng = random.Random(6)
    for _ in range(1_000_000):
        pose = Pose(rng.uniform(-50, 50), rng.uniform(-50, 50), rng.uniform(-3.14, 3.14))
        tx, ty = rng.uniform(-50, 50), rng.uniform(-50, 50)
        e = heading_error(pose, (tx, ty))
        assert -math.pi < e <= math.pi
    announce(
        "A5 PASS - |heading error| < 0.01 rad within 10 simulated seconds from "
        "100 random headings; range (-pi, pi] held over 10^6 random inputs"
    )


def test_a6_pipeline_properties():
    rng = np.random.default_rng(99)
    for _ in range(25):
        frame = GrayImage(rng.integers(0, 256, size=(480, 640), dtype=np.uint8))
        out = preprocess_frame(frame)
        assert (out.width, out.height) == (240, 240)
        assert set(np.unique(out.bits)) <= {0, 1}

    img = BinaryImage((rng.random((32, 32)) > 0.5).astype(np.uint8))
    derived = augment(img)
    assert len(derived) == 7
    mirror = lambda im: augment(im)[0]
    cw = lambda im: augment(im)[1]
    flip = lambda im: augment(im)[3]
    assert np.array_equal(mirror(mirror(img)).bits, img.bits)
    assert np.array_equal(flip(flip(img)).bits, img.bits)
    assert np.array_equal(cw(cw(cw(cw(img)))).bits, img.bits)

    training = sample_set()
    clf = CentroidClassifier.fit(training)
    hits = sum(clf.classify(img)[0] is gesture for gesture, img in training)
    assert hits == len(training), "training recovery must be 100%"

    shifts = [(dy, dx) for dy in (-20, -10, 10, 20) for dx in (-20, -10, 10, 20)]
    total = correct = 0
    for gesture, img in training:
        for dy, dx in shifts:
            shifted = BinaryImage(np.roll(img.bits, (dy, dx), axis=(0, 1)))
            total += 1
            correct += clf.classify(shifted)[0] is gesture
    rate = correct / total
    assert rate >= 0.90, f"translated recovery {rate:.3f} < 0.90"
    announce(
        f"A6 PASS - preprocess always 240x240 binary; augment involutions hold; "
        f"classifier 100% on {len(training)} training silhouettes and "
        f"{rate:.1%} on {total} translated copies"
    )


def test_a7_cli_determinism(fig3_entries, tmp_path, capsys):
    script = tmp_path / "fig3.json"
    script.write_text(
        json.dumps([{"t": t, "gesture": g} for t, g in fig3_entries]),
        encoding="utf-8",
    )
    outputs = []
    for name in ("first", "second"):
        code = cli_main([
            "run", "--testbed", "3", "--script", str(script),
            "--seed", "11", "--out", str(tmp_path / name),
        ])
        capsys.readouterr()
        assert code == 0
        outputs.append({
            f: (tmp_path / name / f).read_bytes()
            for f in ("trajectory.csv", "commands.csv", "report.json", "gestures.json")
        })
    assert outputs[0] == outputs[1]
    announce("A7 PASS - identical flags and seed produce byte-identical CSV and JSON")


def test_a8_console_loop_over_websocket(testbed3_setup):
    """[SECONDARY] server half: an automated operator clicks the Fig. 3
    sequences over the wire, the run completes, and the recorded session
    replays as a batch script with the same command log. The browser
    console's indicator logic is covered by the frontend's own tests."""
    from websockets.sync.client import connect

    from gestureswarm.live import make_server

    reports = []
    server = make_server(
        testbed3_setup, port=0, time_scale=25.0, on_session_end=reports.append
    )
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    port = server.socket.getsockname()[1]

    def recv(ws):
        return json.loads(ws.recv(timeout=10))

    grammar_modes = []
    try:
        with connect(f"ws://127.0.0.1:{port}") as ws:
            state = {"t": 0.0, "lead": 0.0, "trail": 0.0, "halted": True}

            def pump_until(predicate, timeout=60.0):
                deadline = time.monotonic() + timeout
                while time.monotonic() < deadline:
                    frame = recv(ws)
                    if frame["kind"] == "grammar_state":
                        grammar_modes.append(frame["payload"]["mode"])
                    if frame["kind"] == "state_update":
                        xs = [p["x"] for p in frame["payload"]["poses"]]
                        state.update(
                            t=frame["payload"]["t"], lead=max(xs), trail=min(xs),
                            halted=all(p["halted"] for p in frame["payload"]["poses"]),
                        )
                    if frame["kind"] == "run_summary":
                        state["summary"] = frame["payload"]
                    if predicate(frame):
                        return frame
                raise TimeoutError

            def click(name):
                target = state["t"] + 0.7   # stay clear of the debounce window
                pump_until(lambda f: state["t"] >= target)
                ws.send(json.dumps({"gesture": name}))
                pump_until(lambda f: f["kind"] == "gesture_event")

            pump_until(lambda f: f["kind"] == "state_update")
            click("Peace")
            pump_until(lambda f: state["lead"] >= 0.6)
            for name in ("Palm", "Fist", "C", "Peace"):
                click(name)
            pump_until(lambda f: state["trail"] >= 1.6)
            for name in ("Palm", "Fist", "L", "Peace"):
                click(name)
            summary = pump_until(lambda f: f["kind"] == "run_summary", timeout=60.0)
            assert summary["payload"]["completed"] is True
            assert summary["payload"]["collisions"] == []
    finally:
        server.shutdown()

    # the grammar indicator's transition stream matches the bracket structure
    assert grammar_modes == [
        "Moving", "Stopped", "AwaitModifier", "Stopped", "Moving",
        "Stopped", "AwaitModifier", "Stopped", "Moving",
    ]

    deadline = time.monotonic() + 5
    while not reports and time.monotonic() < deadline:
        time.sleep(0.02)
    live = reports[0]
    script = as_script([(tick * live.dt, g.value) for tick, g in live.gesture_timeline])
    batch = run_scenario(testbed3_setup, script, max_time=120.0)
    assert [(r.command, r.issued_tick, r.delivered_tick) for r in live.commands] == [
        (r.command, r.issued_tick, r.delivered_tick) for r in batch.commands
    ]
    assert batch.completed and batch.collisions == []
    announce(
        "A8 PASS - websocket operator completed testbed 3 with zero collisions; "
        "grammar transitions matched; recorded session replayed identically as batch"
    )
