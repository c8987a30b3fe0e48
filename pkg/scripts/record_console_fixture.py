#!/usr/bin/env python3
"""Record a real live session into the console test fixture.

Drives the websocket server through the small-arena scenario the same
way an operator would and saves every outbound frame plus the moments
gestures were clicked. The frontend test suite replays this capture
against its view model.
"""

from __future__ import annotations

import json
import sys
import threading
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from websockets.sync.client import connect

from gestureswarm.config import setup_from_dict
from gestureswarm.live import make_server

OUT = Path(__file__).resolve().parents[1] / "frontend" / "tests" / "fixtures"


def main() -> int:
    setup = setup_from_dict({"testbed": 3})
    server = make_server(setup, port=0, time_scale=25.0)
    threading.Thread(target=server.serve_forever, daemon=True).start()
    port = server.socket.getsockname()[1]

    frames: list[dict] = []
    sends: list[dict] = []
    state = {"t": 0.0, "lead": 0.0, "trail": 0.0}

    with connect(f"ws://127.0.0.1:{port}") as ws:

        def pump(predicate, timeout=60.0):
            deadline = time.monotonic() + timeout
            while time.monotonic() < deadline:
                frame = json.loads(ws.recv(timeout=10))
                frames.append(frame)
                if frame["kind"] == "state_update":
                    xs = [p["x"] for p in frame["payload"]["poses"]]
                    state.update(t=frame["payload"]["t"], lead=max(xs), trail=min(xs))
                if predicate(frame):
                    return frame
            raise TimeoutError

        def click(name):
            pump(lambda f: state["t"] >= state.get("wait_until", 0.0))
            sends.append({"after_seq": frames[-1]["seq"], "gesture": name})
            ws.send(json.dumps({"gesture": name}))
            pump(lambda f: f["kind"] == "gesture_event")
            state["wait_until"] = state["t"] + 0.7

        pump(lambda f: f["kind"] == "state_update")
        click("Peace")
        pump(lambda f: state["lead"] >= 0.6)
        state["wait_until"] = state["t"]
        for name in ("Palm", "Fist", "C", "Peace"):
            click(name)
        pump(lambda f: state["trail"] >= 1.6)
        state["wait_until"] = state["t"]
        for name in ("Palm", "Fist", "L", "Peace"):
            click(name)
        summary = pump(lambda f: f["kind"] == "run_summary")

    server.shutdown()
    assert summary["payload"]["completed"] and not summary["payload"]["collisions"]

    OUT.mkdir(parents=True, exist_ok=True)
    fixture = {"frames": frames, "sends": sends}
    path = OUT / "session.json"
    path.write_text(json.dumps(fixture, indent=1) + "\n", encoding="utf-8")
    print(f"recorded {len(frames)} frames, {len(sends)} clicks -> {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
