"""Core domain types, parameter defaults, and the built-in testbeds.

Coordinate convention: the arena spans x in [0, width] and y in
[-height/2, +height/2]. The swarm travels toward +x; the formation is
spread along y and is symmetric about y = 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field


class ConfigError(ValueError):
    """Raised for invalid configuration (unknown testbed id, bad config keys)."""


class DimensionError(ValueError):
    """Raised when an image has the wrong dimensions for an operation."""


class StreamOrderError(ValueError):
    """Raised when a timestamped stream goes backwards in time."""


class DegeneratePlanError(ValueError):
    """Raised when a waypoint plan would have zero travel distance."""


class UndefinedBearingError(ValueError):
    """Raised when a bearing is requested toward the robot's own position."""


def normalize_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi].

    Values already in range are returned bit-identically.
    """
    if -math.pi < a <= math.pi:
        return a
    r = math.atan2(math.sin(a), math.cos(a))
    if r <= -math.pi:
        r = math.pi
    return r


class Gesture(enum.Enum):
    """The seven classification outcomes.

    OK is classifiable but mapped to no swarm action; NONE means no hand
    in frame.
    """

    C = "C"
    FIST = "Fist"
    L = "L"
    OK = "Ok"
    PEACE = "Peace"
    PALM = "Palm"
    NONE = "None"

    @classmethod
    def from_name(cls, name: str) -> "Gesture":
        for g in cls:
            if g.value == name:
                return g
        raise ConfigError(f"unknown gesture name: {name!r}")


class CommandKind(enum.Enum):
    STOP = "Stop"
    RESUME = "Resume"
    COHESION_STEP = "CohesionStep"


# Cohesion direction: beta = 0 contracts the formation, beta = 1 expands it.
BETA_INCREASE = 0
BETA_DECREASE = 1


@dataclass(frozen=True)
class SwarmCommand:
    """Parsed operator intent broadcast to every robot."""

    kind: CommandKind
    beta: int | None = None

    def __post_init__(self):
        if self.kind is CommandKind.COHESION_STEP:
            if self.beta not in (0, 1):
                raise ValueError("CohesionStep requires beta in {0, 1}")
        elif self.beta is not None:
            raise ValueError(f"{self.kind.value} takes no beta")

    @classmethod
    def stop(cls) -> "SwarmCommand":
        return cls(CommandKind.STOP)

    @classmethod
    def resume(cls) -> "SwarmCommand":
        return cls(CommandKind.RESUME)

    @classmethod
    def cohesion_step(cls, beta: int) -> "SwarmCommand":
        return cls(CommandKind.COHESION_STEP, beta)


@dataclass(frozen=True)
class Pose:
    """Planar robot state (x, y, phi); phi is stored normalized to (-pi, pi]."""

    x: float
    y: float
    phi: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.phi)):
            raise ValueError(f"pose components must be finite, got {self}")
        object.__setattr__(self, "phi", normalize_angle(self.phi))


@dataclass(frozen=True)
class RobotParams:
    """Per-robot controller and geometry parameters."""

    v0: float = 0.15          # constant linear velocity, m/s
    kp: float = 2.0           # proportional heading gain, 1/s
    radius: float = 0.105     # collision disc, m (Turtlebot3 Burger footprint)
    arrival_tol: float = 0.05  # x-axis waypoint acceptance, m

    def __post_init__(self):
        for name in ("v0", "kp", "radius", "arrival_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"RobotParams.{name} must be > 0")


@dataclass(frozen=True)
class SwarmConfig:
    """Swarm-level configuration: formation, waypoint count, cohesion step."""

    n_robots: int
    m_waypoints: int                  # number of waypoint intervals per plan
    y_offset: float                   # cohesion step size, m
    initial_poses: tuple[Pose, ...]
    x_goal: float
    min_abs_y: float = 0.1            # sign-preservation floor for contraction

    def __post_init__(self):
        if self.n_robots < 1:
            raise ValueError("n_robots must be >= 1")
        if self.m_waypoints < 1:
            raise ValueError("m_waypoints must be >= 1")
        if self.y_offset <= 0:
            raise ValueError("y_offset must be > 0")
        object.__setattr__(self, "initial_poses", tuple(self.initial_poses))
        if len(self.initial_poses) != self.n_robots:
            raise ValueError(
                f"expected {self.n_robots} initial poses, got {len(self.initial_poses)}"
            )


@dataclass(frozen=True)
class Wall:
    """Axis-aligned rectangle: center (cx, cy), full extents (sx, sy)."""

    cx: float
    cy: float
    sx: float
    sy: float

    def __post_init__(self):
        if self.sx <= 0 or self.sy <= 0:
            raise ValueError("wall extents must be > 0")

    def distance_to(self, x: float, y: float) -> float:
        """Euclidean distance from a point to this rectangle (0 inside)."""
        dx = max(abs(x - self.cx) - 0.5 * self.sx, 0.0)
        dy = max(abs(y - self.cy) - 0.5 * self.sy, 0.0)
        return math.hypot(dx, dy)


@dataclass(frozen=True)
class Arena:
    """Walled arena; x in [0, width], y in [-height/2, +height/2]."""

    width: float
    height: float
    walls: tuple[Wall, ...] = ()

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("arena dimensions must be > 0")
        object.__setattr__(self, "walls", tuple(self.walls))
        for w in self.walls:
            if not (
                0.0 <= w.cx - 0.5 * w.sx
                and w.cx + 0.5 * w.sx <= self.width
                and -0.5 * self.height <= w.cy - 0.5 * w.sy
                and w.cy + 0.5 * w.sy <= 0.5 * self.height
            ):
                raise ValueError(f"wall {w} lies outside the arena bounds")


# Gap widths: the small opening is 1 m (given for testbed 3); the
# intermediate width is not numerically specified and is fixed at 2 m.
SMALL_GAP = 1.0
INTERMEDIATE_GAP = 2.0
WALL_THICKNESS = 0.1

DEFAULT_Y_OFFSET = 0.25
DEFAULT_M = 8
DEFAULT_MIN_ABS_Y = 0.1
DEFAULT_DT = 0.05
DEFAULT_SEED = 0
DEFAULT_MAX_TIME = 120.0

# Physical-mode preset: the distributed deployment adds ~0.5 s of network
# delay, compensated by running the robots slower.
PHYSICAL_LATENCY = 0.5
PHYSICAL_V0_FACTOR = 0.5

DEFAULT_PARAMS = RobotParams()


def crossing_wall(x: float, gap: float, height: float,
                  thickness: float = WALL_THICKNESS) -> tuple[Wall, Wall]:
    """Two wall segments crossing the arena at x, leaving a centered gap."""
    half_h = 0.5 * height
    half_gap = 0.5 * gap
    seg = half_h - half_gap
    if seg <= 0:
        raise ValueError("gap wider than the arena")
    upper = Wall(cx=x, cy=half_gap + 0.5 * seg, sx=thickness, sy=seg)
    lower = Wall(cx=x, cy=-(half_gap + 0.5 * seg), sx=thickness, sy=seg)
    return upper, lower


def _line_formation(x0: float, spacing: float, n: int = 3) -> tuple[Pose, ...]:
    # Symmetric about y = 0, middle robot on the centerline, facing +x.
    ys = [spacing * (i - (n - 1) / 2) for i in range(n)]
    ys.sort(reverse=True)
    return tuple(Pose(x0, y, 0.0) for y in ys)


def builtin_testbed(testbed_id: int) -> tuple[Arena, SwarmConfig]:
    """Return the geometry and initial formation of a built-in testbed.

    Testbeds 1 and 2 are 8 m x 4 m; robots start 1 m from the end with
    1.5 m inter-robot spacing. Testbed 1 has an intermediate opening near
    each end and a small central opening; testbed 2 has only the small
    central opening. Testbed 3 is 2.5 m x 2.5 m; robots start 0.5 m from
    the end with 0.6 m spacing, and a single wall with a 1 m opening sits
    1 m from the start line.
    """
    if testbed_id == 1:
        arena = Arena(
            width=8.0,
            height=4.0,
            walls=(
                *crossing_wall(2.0, INTERMEDIATE_GAP, 4.0),
                *crossing_wall(4.0, SMALL_GAP, 4.0),
                *crossing_wall(6.0, INTERMEDIATE_GAP, 4.0),
            ),
        )
        swarm = SwarmConfig(
            n_robots=3,
            m_waypoints=DEFAULT_M,
            y_offset=DEFAULT_Y_OFFSET,
            initial_poses=_line_formation(1.0, 1.5),
            x_goal=7.0,
        )
    elif testbed_id == 2:
        arena = Arena(
            width=8.0,
            height=4.0,
            walls=crossing_wall(4.0, SMALL_GAP, 4.0),
        )
        swarm = SwarmConfig(
            n_robots=3,
            m_waypoints=DEFAULT_M,
            y_offset=DEFAULT_Y_OFFSET,
            initial_poses=_line_formation(1.0, 1.5),
            x_goal=7.0,
        )
    elif testbed_id == 3:
        arena = Arena(
            width=2.5,
            height=2.5,
            walls=crossing_wall(1.5, SMALL_GAP, 2.5),
        )
        swarm = SwarmConfig(
            n_robots=3,
            m_waypoints=DEFAULT_M,
            y_offset=DEFAULT_Y_OFFSET,
            initial_poses=_line_formation(0.5, 0.6),
            x_goal=2.0,
        )
    else:
        raise ConfigError(f"unknown testbed id: {testbed_id} (expected 1, 2, or 3)")
    return arena, swarm
