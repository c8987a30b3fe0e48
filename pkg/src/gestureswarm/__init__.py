"""Deterministic multi-robot swarm simulator steered by hand-gesture sequences."""

from .core import (
    Arena,
    ConfigError,
    DimensionError,
    Gesture,
    Pose,
    RobotParams,
    SwarmCommand,
    SwarmConfig,
    Wall,
    builtin_testbed,
)
from .config import RunSetup, load_setup, setup_from_dict
from .engine import RunReport, SwarmSim, run_scenario

__all__ = [
    "Arena",
    "ConfigError",
    "DimensionError",
    "Gesture",
    "Pose",
    "RobotParams",
    "RunReport",
    "RunSetup",
    "SwarmCommand",
    "SwarmConfig",
    "SwarmSim",
    "Wall",
    "builtin_testbed",
    "load_setup",
    "run_scenario",
    "setup_from_dict",
]
