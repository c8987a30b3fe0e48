"""JSON run configuration.

A configuration document is a UTF-8 JSON object with top-level keys
``arena``, ``swarm``, ``robot_params``, ``latency`` (seconds), ``seed``
(unsigned integer) and ``dt`` (seconds). A built-in testbed is selected
with ``"testbed": 1|2|3``; any key may then be overridden.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .core import (
    Arena,
    ConfigError,
    DEFAULT_DT,
    DEFAULT_SEED,
    Pose,
    RobotParams,
    SwarmConfig,
    Wall,
    builtin_testbed,
)


@dataclass(frozen=True)
class RunSetup:
    """Everything a simulation run needs besides the gesture script."""

    arena: Arena
    swarm: SwarmConfig
    params: RobotParams
    latency: float = 0.0
    seed: int = DEFAULT_SEED
    dt: float = DEFAULT_DT

    def __post_init__(self):
        if self.latency < 0:
            raise ConfigError("latency must be >= 0")
        if self.dt <= 0:
            raise ConfigError("dt must be > 0")
        if self.seed < 0:
            raise ConfigError("seed must be an unsigned integer")


def _parse_arena(doc: dict[str, Any], base: Arena | None) -> Arena:
    width = doc.get("width", base.width if base else None)
    height = doc.get("height", base.height if base else None)
    if width is None or height is None:
        raise ConfigError("arena requires width and height (or a testbed to inherit from)")
    if "walls" in doc:
        walls = tuple(Wall(*map(float, w)) for w in doc["walls"])
    else:
        walls = base.walls if base else ()
    return Arena(width=float(width), height=float(height), walls=walls)


def _parse_swarm(doc: dict[str, Any], base: SwarmConfig | None) -> SwarmConfig:
    def pick(key: str, attr: str):
        if key in doc:
            return doc[key]
        if base is not None:
            return getattr(base, attr)
        raise ConfigError(f"swarm requires {key} (or a testbed to inherit from)")

    if "initial_poses" in doc:
        poses = tuple(Pose(*map(float, p)) for p in doc["initial_poses"])
    else:
        if base is None:
            raise ConfigError("swarm requires initial_poses (or a testbed to inherit from)")
        poses = base.initial_poses
    return SwarmConfig(
        n_robots=int(pick("n_robots", "n_robots")),
        m_waypoints=int(pick("m_waypoints", "m_waypoints")),
        y_offset=float(pick("y_offset", "y_offset")),
        initial_poses=poses,
        x_goal=float(pick("x_goal", "x_goal")),
        min_abs_y=float(pick("min_abs_y", "min_abs_y")),
    )


def _parse_params(doc: dict[str, Any], base: RobotParams) -> RobotParams:
    known = {f.name for f in dataclasses.fields(RobotParams)}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown robot_params keys: {sorted(unknown)}")
    return dataclasses.replace(base, **{k: float(v) for k, v in doc.items()})


def setup_from_dict(doc: dict[str, Any]) -> RunSetup:
    """Build a RunSetup from a parsed configuration document."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    arena = swarm = None
    if "testbed" in doc:
        arena, swarm = builtin_testbed(int(doc["testbed"]))
    if "arena" in doc:
        arena = _parse_arena(doc["arena"], arena)
    if "swarm" in doc:
        swarm = _parse_swarm(doc["swarm"], swarm)
    if arena is None or swarm is None:
        raise ConfigError("configuration needs a testbed or explicit arena and swarm")
    params = _parse_params(doc.get("robot_params", {}), RobotParams())
    try:
        return RunSetup(
            arena=arena,
            swarm=swarm,
            params=params,
            latency=float(doc.get("latency", 0.0)),
            seed=int(doc.get("seed", DEFAULT_SEED)),
            dt=float(doc.get("dt", DEFAULT_DT)),
        )
    except ValueError as e:
        raise ConfigError(str(e)) from e


def load_setup(path: str | Path) -> RunSetup:
    """Load a RunSetup from a JSON configuration file."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: not valid JSON ({e})") from e
    return setup_from_dict(doc)
