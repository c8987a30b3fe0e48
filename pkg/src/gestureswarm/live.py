"""Live operator session over a WebSocket.

The server runs the same SwarmSim loop as batch mode, paced so that one
tick elapses per dt of wall clock. Outbound traffic is JSON frames
{"kind", "seq", "payload"} with strictly increasing seq; inbound frames
are {"gesture": name}, timestamped on arrival at the next tick and fed
through the debounce-grammar-bus path exactly as a scripted gesture
would be.

Outbound kinds: the five session messages (state_update, gesture_event,
grammar_state, command_applied, run_summary) plus two plumbing frames:
session_config (sent once at session start, carrying the arena and
robot geometry the console needs to draw) and error (a rejected inbound
frame; the session continues).
"""

from __future__ import annotations

import json
import logging
import queue
import threading
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from websockets.exceptions import ConnectionClosed
from websockets.sync.server import Server, ServerConnection, serve

from .config import RunSetup
from .core import Gesture
from .engine import SwarmSim

log = logging.getLogger(__name__)

STATE_RATE_CAP = 30.0   # state_update frames per second, at most


@dataclass
class LiveSession:
    """One operator session driving one simulation instance."""

    sim: SwarmSim
    send: Callable[[str], None]
    inbound: "queue.Queue[tuple[str, Any]]"
    time_scale: float = 1.0          # >1 runs faster than real time (tests)
    max_time: float | None = None
    seq: int = 0
    _state_stride: int = field(init=False, default=1)

    def __post_init__(self):
        # Cap outbound state frames at STATE_RATE_CAP per wall-clock second.
        tick_rate = self.time_scale / self.sim.dt
        self._state_stride = max(1, int(-(-tick_rate // STATE_RATE_CAP)))
        self.sim.on_gesture_event = lambda ev: self._push(
            "gesture_event", {"t": ev.timestamp, "gesture": ev.gesture.value}
        )
        self.sim.on_grammar_change = lambda st: self._push(
            "grammar_state",
            {
                "t": self.sim.time,
                "mode": st.mode.value,
                "pending": list(st.pending),
            },
        )
        self.sim.on_command_applied = lambda robot_id, cmd, tick: self._push(
            "command_applied",
            {
                "t": tick * self.sim.dt,
                "robot_id": robot_id,
                "command": cmd.kind.value,
                "beta": cmd.beta,
            },
        )

    def _push(self, kind: str, payload: dict) -> None:
        frame = json.dumps(
            {"kind": kind, "seq": self.seq, "payload": payload},
            sort_keys=True,
        )
        self.seq += 1
        self.send(frame)

    def _push_state(self) -> None:
        self._push(
            "state_update",
            {
                "t": self.sim.time,
                "poses": [
                    {
                        "robot_id": i,
                        "x": p.x,
                        "y": p.y,
                        "phi": p.phi,
                        "halted": self.sim.agents[i].halted,
                    }
                    for i, p in enumerate(self.sim.poses)
                ],
            },
        )

    def _push_config(self) -> None:
        arena = self.sim.arena
        self._push(
            "session_config",
            {
                "dt": self.sim.dt,
                "latency": self.sim.setup.latency,
                "n_robots": self.sim.swarm.n_robots,
                "robot_radius": self.sim.params.radius,
                "x_goal": self.sim.swarm.x_goal,
                "grammar_mode": self.sim.grammar.mode.value,
                "arena": {
                    "width": arena.width,
                    "height": arena.height,
                    "walls": [[w.cx, w.cy, w.sx, w.sy] for w in arena.walls],
                },
            },
        )

    def _drain_inbound_until(self, deadline: float) -> bool:
        """Process inbound items until the deadline; False once closed."""
        while True:
            timeout = deadline - time.monotonic()
            try:
                item = self.inbound.get(timeout=max(0.0, timeout))
            except queue.Empty:
                return True
            kind, value = item
            if kind == "closed":
                return False
            if kind == "gesture":
                self.sim.inject_gesture(value)
            elif kind == "bad":
                self._push("error", {"message": value})
            if timeout <= 0:
                return True

    def run(self) -> None:
        self._push_config()
        self._push_state()
        start = time.monotonic()
        summary_sent = False
        while True:
            deadline = start + (self.sim.tick_count + 1) * self.sim.dt / self.time_scale
            if not self._drain_inbound_until(deadline):
                return
            if self.max_time is not None and self.sim.time >= self.max_time:
                if not summary_sent:
                    self._push("run_summary", self.sim.report().summary_dict())
                    summary_sent = True
                continue   # keep serving inbound until the peer departs
            self.sim.step()
            if self.sim.tick_count % self._state_stride == 0:
                self._push_state()
            if self.sim.completed and not summary_sent:
                self._push("run_summary", self.sim.report().summary_dict())
                summary_sent = True


def _reader(ws: ServerConnection, inbound: "queue.Queue[tuple[str, Any]]") -> None:
    try:
        for raw in ws:
            try:
                doc = json.loads(raw)
                name = doc["gesture"]
                gesture = Gesture.from_name(name)
            except Exception:
                inbound.put(("bad", f"expected {{\"gesture\": name}}, got {raw!r}"))
                continue
            inbound.put(("gesture", gesture))
    except ConnectionClosed:
        pass
    finally:
        inbound.put(("closed", None))


def session_handler(
    setup: RunSetup,
    max_time: float | None = None,
    time_scale: float = 1.0,
    busy_lock: threading.Lock | None = None,
    on_session_end: Callable[..., None] | None = None,
):
    """Build the per-connection handler for a websocket server."""
    lock = busy_lock or threading.Lock()

    def handler(ws: ServerConnection) -> None:
        if not lock.acquire(blocking=False):
            ws.send(json.dumps(
                {"kind": "error", "seq": 0,
                 "payload": {"message": "a session is already active"}}))
            ws.close()
            return
        try:
            sim = SwarmSim(setup)
            inbound: queue.Queue[tuple[str, Any]] = queue.Queue()
            reader = threading.Thread(target=_reader, args=(ws, inbound), daemon=True)
            reader.start()
            session = LiveSession(
                sim=sim,
                send=ws.send,
                inbound=inbound,
                time_scale=time_scale,
                max_time=max_time,
            )
            try:
                session.run()
            except ConnectionClosed:
                pass
            log.info("session over after %s ticks", sim.tick_count)
            if on_session_end is not None:
                on_session_end(sim.report())
        finally:
            lock.release()

    return handler


def make_server(
    setup: RunSetup,
    host: str = "127.0.0.1",
    port: int = 0,
    max_time: float | None = None,
    time_scale: float = 1.0,
    on_session_end: Callable[..., None] | None = None,
) -> Server:
    """Create (but do not start) the live websocket server."""
    handler = session_handler(setup, max_time, time_scale, on_session_end=on_session_end)
    return serve(handler, host, port)


def serve_forever(
    setup: RunSetup,
    host: str = "127.0.0.1",
    port: int = 8765,
    max_time: float | None = None,
) -> None:
    with make_server(setup, host, port, max_time) as server:
        print(f"live session on ws://{host}:{port} (Ctrl-C to stop)")
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass
