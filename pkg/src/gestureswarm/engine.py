"""Deterministic fixed-timestep swarm world.

One tick, in order: (1) gestures due now run through debounce and the
grammar, and released commands are broadcast on the bus; (2) each agent
polls its own topics, applies delivered commands, and computes its
control from its latest delivered odometry; (3) all poses integrate
forward; (4) the odometry provider publishes every robot's new pose;
(5) collisions are recorded.

Internally the engine passes integer tick counts as bus timestamps, so
latency accounting is exact: a command issued on tick k with latency L
is delivered on tick k + ceil(L/dt), and logged timestamps differ by
exactly the configured latency in decimal arithmetic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path
from typing import Any, Callable

from .agent import AgentState, control_step, handle_command
from .bus import MessageBus, Subscription
from .config import RunSetup
from .core import (
    Arena,
    ConfigError,
    DEFAULT_MAX_TIME,
    Gesture,
    Pose,
    SwarmCommand,
    CommandKind,
    normalize_angle,
)
from .debounce import DEFAULT_DEBOUNCE_INTERVAL, Debouncer, GestureEvent
from .grammar import GrammarState, Mode, step as grammar_step

TOPIC_GESTURE = "gesture"
TOPIC_COMMAND = "command"


def odom_topic(robot_id: int) -> str:
    return f"odom/{robot_id}"


def integrate(pose: Pose, v: float, omega: float, dt: float) -> Pose:
    """Forward-Euler step of the unicycle kinematics."""
    if dt <= 0:
        raise ValueError("dt must be > 0")
    return Pose(
        x=pose.x + v * math.cos(pose.phi) * dt,
        y=pose.y + v * math.sin(pose.phi) * dt,
        phi=normalize_angle(pose.phi + omega * dt),
    )


def check_collision(arena: Arena, pose: Pose, radius: float) -> int | None:
    """Index of the first wall closer to (x, y) than radius, else None."""
    if radius <= 0:
        raise ValueError("radius must be > 0")
    for i, wall in enumerate(arena.walls):
        if wall.distance_to(pose.x, pose.y) < radius:
            return i
    return None


def tick_label(tick: int, dt: float) -> str:
    """Exact decimal rendering of tick * dt (e.g. tick 11, dt 0.05 -> '0.55')."""
    return format(Decimal(tick) * Decimal(repr(dt)), "f")


def time_to_tick(t: float, dt: float) -> int:
    """First tick at or after time t (tolerant of float rounding)."""
    return max(0, math.ceil(t / dt - 1e-9))


@dataclass(frozen=True)
class ScriptEntry:
    t: float
    gesture: Gesture


def load_script(path: str | Path, classify_image=None) -> list[ScriptEntry]:
    """Read a gesture script: a JSON array of {"t": seconds, "gesture": name}.

    An entry may instead carry {"image": path} pointing at a 640x480
    grayscale frame; it is run through the preprocessing and classifier
    stages at load time (``classify_image`` defaults to the baseline
    pipeline).
    """
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: not valid JSON ({e})") from e
    if not isinstance(doc, list):
        raise ConfigError(f"{path}: gesture script must be a JSON array")
    entries = []
    base = Path(path).parent
    for item in doc:
        if "t" not in item:
            raise ConfigError(f"script entry {item!r} is missing 't'")
        t = float(item["t"])
        if t < 0:
            raise ConfigError("script timestamps must be >= 0")
        if "gesture" in item:
            gesture = Gesture.from_name(item["gesture"])
        elif "image" in item:
            if classify_image is None:
                classify_image = _default_classify_image
            gesture = classify_image(base / item["image"])
        else:
            raise ConfigError(f"script entry {item!r} needs 'gesture' or 'image'")
        entries.append(ScriptEntry(t=t, gesture=gesture))
    entries.sort(key=lambda e: e.t)
    return entries


def _default_classify_image(path: Path) -> Gesture:
    from .classifier import default_classifier
    from .images import load_gray, preprocess_frame

    silhouette = preprocess_frame(load_gray(path))
    gesture, _ = default_classifier().classify(silhouette)
    return gesture


@dataclass
class CommandRecord:
    """One broadcast command and its bus timing, in ticks."""

    command: SwarmCommand
    issued_tick: int
    delivered_tick: int | None = None


@dataclass
class CollisionEvent:
    tick: int
    robot_id: int
    wall_index: int


@dataclass
class RunReport:
    """Everything a finished (or timed-out) run produced."""

    dt: float
    completed: bool
    completion_tick: int | None
    collisions: list[CollisionEvent]
    final_poses: list[Pose]
    trajectory: list[tuple[int, int, float, float, float, bool]]  # tick, robot, x, y, phi, halted
    commands: list[CommandRecord]
    gesture_timeline: list[tuple[int, Gesture]]   # raw injections, by tick

    @property
    def completion_time(self) -> str | None:
        return None if self.completion_tick is None else tick_label(self.completion_tick, self.dt)

    def summary_dict(self) -> dict[str, Any]:
        return {
            "completed": self.completed,
            "completion_time": None if self.completion_time is None else float(self.completion_time),
            "collisions": [
                {
                    "t": float(tick_label(c.tick, self.dt)),
                    "robot_id": c.robot_id,
                    "wall_index": c.wall_index,
                }
                for c in self.collisions
            ],
            "final_poses": [
                {"x": p.x, "y": p.y, "phi": p.phi} for p in self.final_poses
            ],
        }

    def summary_json(self) -> str:
        return json.dumps(self.summary_dict(), indent=2, sort_keys=True) + "\n"


class SwarmSim:
    """The simulation loop shared by batch runs and live sessions."""

    def __init__(
        self,
        setup: RunSetup,
        debounce_interval: float = DEFAULT_DEBOUNCE_INTERVAL,
    ):
        self.setup = setup
        self.dt = setup.dt
        self.latency_ticks = time_to_tick(setup.latency, setup.dt)
        self.arena = setup.arena
        self.params = setup.params
        self.swarm = setup.swarm
        n = setup.swarm.n_robots

        self.bus = MessageBus()
        self.debouncer = Debouncer(debounce_interval)
        # Robots start halted, so the session grammar starts Stopped: the
        # operator's opening Peace is the standalone go command.
        self.grammar = GrammarState(Mode.STOPPED)
        self.poses: list[Pose] = list(setup.swarm.initial_poses)
        self.agents = [
            AgentState.from_initial(p, setup.swarm, setup.params)
            for p in setup.swarm.initial_poses
        ]
        self._last_odom: list[Pose] = list(self.poses)
        self._cmd_subs: list[Subscription] = [
            self.bus.subscribe(TOPIC_COMMAND, f"robot/{i}") for i in range(n)
        ]
        self._odom_subs: list[Subscription] = [
            self.bus.subscribe(odom_topic(i), f"robot/{i}") for i in range(n)
        ]
        self._gesture_monitor = self.bus.subscribe(TOPIC_GESTURE, "monitor")

        self.tick_count = 0
        self.completed = False
        self.completion_tick: int | None = None
        self.collisions: list[CollisionEvent] = []
        self.commands: list[CommandRecord] = []
        self.trajectory: list[tuple[int, int, float, float, float, bool]] = []
        self.gesture_timeline: list[tuple[int, Gesture]] = []
        self._pending_gestures: list[Gesture] = []

        # Observer hooks for the live session; all optional.
        self.on_gesture_event: Callable[[GestureEvent], None] | None = None
        self.on_grammar_change: Callable[[GrammarState], None] | None = None
        self.on_command_applied: Callable[[int, SwarmCommand, int], None] | None = None

        self._log_poses()

    # -- robots only ever see their own topics; exposed for interface checks
    def robot_topics(self, robot_id: int) -> set[str]:
        return {
            s.topic
            for s in (*self._cmd_subs, *self._odom_subs)
            if s.subscriber == f"robot/{robot_id}"
        }

    @property
    def time(self) -> float:
        return self.tick_count * self.dt

    @property
    def time_label(self) -> str:
        return tick_label(self.tick_count, self.dt)

    def inject_gesture(self, gesture: Gesture) -> None:
        """Queue a raw gesture for the next tick (live-mode entry point)."""
        self._pending_gestures.append(gesture)

    def _log_poses(self) -> None:
        for i, pose in enumerate(self.poses):
            self.trajectory.append(
                (self.tick_count, i, pose.x, pose.y, pose.phi, self.agents[i].halted)
            )

    def _run_gesture_pipeline(self, gestures: list[Gesture]) -> None:
        now = self.tick_count
        for gesture in gestures:
            self.gesture_timeline.append((now, gesture))
            event = self.debouncer.feed(gesture, now * self.dt)
            if event is None:
                continue
            self.bus.publish(TOPIC_GESTURE, event, now=now, latency=self.latency_ticks)
            if self.on_gesture_event:
                self.on_gesture_event(event)
            new_state, released = grammar_step(self.grammar, event)
            changed = new_state != self.grammar
            self.grammar = new_state
            if changed and self.on_grammar_change:
                self.on_grammar_change(new_state)
            for cmd in released:
                index = len(self.commands)
                self.commands.append(CommandRecord(command=cmd, issued_tick=now))
                self.bus.publish(
                    TOPIC_COMMAND, (index, cmd), now=now, latency=self.latency_ticks
                )

    def step(self, gestures: list[Gesture] | None = None) -> None:
        """Advance the world by one tick."""
        due = list(gestures or [])
        if self._pending_gestures:
            due = self._pending_gestures + due
            self._pending_gestures = []
        self._run_gesture_pipeline(due)

        now = self.tick_count
        velocities = []
        for i, agent in enumerate(self.agents):
            for msg in self._cmd_subs[i].poll(now):
                index, cmd = msg.payload
                record = self.commands[index]
                if record.delivered_tick is None:
                    record.delivered_tick = now
                handle_command(agent, cmd)
                if self.on_command_applied:
                    self.on_command_applied(i, cmd, now)
            for msg in self._odom_subs[i].poll(now):
                self._last_odom[i] = msg.payload
            velocities.append(control_step(agent, self._last_odom[i]))

        for i, (v, omega) in enumerate(velocities):
            self.poses[i] = integrate(self.poses[i], v, omega, self.dt)

        for i, pose in enumerate(self.poses):
            self.bus.publish(odom_topic(i), pose, now=now, latency=self.latency_ticks)

        for i, pose in enumerate(self.poses):
            wall = check_collision(self.arena, pose, self.params.radius)
            if wall is not None:
                self.collisions.append(CollisionEvent(self.tick_count + 1, i, wall))

        self._gesture_monitor.poll(now)   # keep the broadcast channel drained
        self.tick_count += 1
        self._log_poses()

        if not self.completed and self._all_at_goal():
            self.completed = True
            self.completion_tick = self.tick_count

    def _all_at_goal(self) -> bool:
        tol = self.params.arrival_tol
        goal = self.swarm.x_goal
        return all(abs(p.x - goal) <= tol for p in self.poses)

    def report(self) -> RunReport:
        return RunReport(
            dt=self.dt,
            completed=self.completed,
            completion_tick=self.completion_tick,
            collisions=list(self.collisions),
            final_poses=list(self.poses),
            trajectory=list(self.trajectory),
            commands=list(self.commands),
            gesture_timeline=list(self.gesture_timeline),
        )


def run_scenario(
    setup: RunSetup,
    script: list[ScriptEntry],
    max_time: float = DEFAULT_MAX_TIME,
    debounce_interval: float = DEFAULT_DEBOUNCE_INTERVAL,
) -> RunReport:
    """Run a scripted scenario to completion or max_time."""
    for entry in script:
        if entry.t > max_time:
            raise ConfigError(
                f"script entry at t={entry.t} lies beyond max_time={max_time}"
            )
    sim = SwarmSim(setup, debounce_interval=debounce_interval)
    due: dict[int, list[Gesture]] = {}
    for entry in script:
        due.setdefault(time_to_tick(entry.t, setup.dt), []).append(entry.gesture)
    last_tick = time_to_tick(max_time, setup.dt)
    while sim.tick_count < last_tick and not sim.completed:
        sim.step(due.get(sim.tick_count, []))
    return sim.report()
