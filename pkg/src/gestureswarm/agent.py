"""Per-robot controller.

Each robot follows a straight lane of waypoints toward the goal x,
holding a commanded y that cohesion steps move toward or away from the
centerline. Control is a constant linear velocity plus proportional
feedback on the heading error; waypoint arrival is judged on x only.

Agents consume nothing but broadcast commands and their own odometry --
the API deliberately admits no peer-robot inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import (
    BETA_INCREASE,
    CommandKind,
    DegeneratePlanError,
    Pose,
    RobotParams,
    SwarmCommand,
    SwarmConfig,
    UndefinedBearingError,
    normalize_angle,
)


@dataclass
class WaypointPlan:
    """Evenly spaced targets from the start x to the goal x."""

    x_offset: float
    waypoints: list[tuple[float, float]]
    cursor: int = 0

    @property
    def final_index(self) -> int:
        return len(self.waypoints) - 1


def generate_waypoints(x_i: float, x_d: float, m: int, y: float) -> WaypointPlan:
    """Split the travel [x_i, x_d] into m equal intervals at lane y."""
    if m < 1:
        raise ValueError(f"waypoint interval count must be >= 1, got {m}")
    if x_i == x_d:
        raise DegeneratePlanError("start and goal x coincide; no plan to generate")
    x_offset = abs(x_i - x_d) / m
    s = 1.0 if x_d > x_i else -1.0
    return WaypointPlan(
        x_offset=x_offset,
        waypoints=[(x_i + k * s * x_offset, y) for k in range(m + 1)],
    )


def apply_cohesion(
    y_n: float, beta: int, y_offset: float, min_abs_y: float = 0.0
) -> tuple[float, bool]:
    """One cohesion step on a robot's lane; returns (new_y, rejected).

    beta = 0 moves the lane toward the centerline, beta = 1 away from
    it; a robot on the centerline never moves laterally. A contraction
    that would cross the centerline (or come within min_abs_y of it) is
    rejected and leaves the lane unchanged.
    """
    if y_offset <= 0:
        raise ValueError("y_offset must be > 0")
    if y_n == 0.0:
        return y_n, False
    toward_center = (beta == BETA_INCREASE)
    sign = 1.0 if y_n > 0 else -1.0
    new_y = y_n - sign * y_offset if toward_center else y_n + sign * y_offset
    # epsilon keeps float dust (0.35 - 0.25 < 0.1) from rejecting an
    # exactly-on-the-floor step
    if toward_center and sign * new_y < min_abs_y - 1e-12:
        return y_n, True
    return new_y, False


def heading_error(pose: Pose, target: tuple[float, float]) -> float:
    """Wrapped difference between the bearing to target and the heading.

    Always in (-pi, pi].
    """
    dx = target[0] - pose.x
    dy = target[1] - pose.y
    if dx == 0.0 and dy == 0.0:
        raise UndefinedBearingError("bearing to the robot's own position is undefined")
    phi_d = math.atan2(dy, dx)
    e = phi_d - pose.phi
    e_new = math.atan2(math.sin(e), math.cos(e))
    if e_new <= -math.pi:
        e_new = math.pi
    return e_new


@dataclass
class AgentState:
    """Mutable controller state for one robot; single-owner."""

    plan: WaypointPlan
    commanded_y: float
    params: RobotParams
    y_offset: float
    min_abs_y: float
    halted: bool = True
    rejected_steps: int = 0

    @classmethod
    def from_initial(cls, pose: Pose, swarm: SwarmConfig, params: RobotParams) -> "AgentState":
        return cls(
            plan=generate_waypoints(pose.x, swarm.x_goal, swarm.m_waypoints, pose.y),
            commanded_y=pose.y,
            params=params,
            y_offset=swarm.y_offset,
            min_abs_y=swarm.min_abs_y,
        )


def handle_command(state: AgentState, cmd: SwarmCommand) -> None:
    """Apply one broadcast command to the agent."""
    if cmd.kind is CommandKind.STOP:
        state.halted = True
    elif cmd.kind is CommandKind.RESUME:
        state.halted = False
    else:
        new_y, rejected = apply_cohesion(
            state.commanded_y, cmd.beta, state.y_offset, state.min_abs_y
        )
        if rejected:
            state.rejected_steps += 1
            return
        state.commanded_y = new_y
        wp = state.plan.waypoints
        for i in range(state.plan.cursor, len(wp)):
            wp[i] = (wp[i][0], new_y)


def control_step(state: AgentState, pose: Pose) -> tuple[float, float]:
    """Compute (v, omega) for the current tick from the robot's own pose.

    Advances the waypoint cursor on x-only arrival before computing the
    control; a halted agent or one arrived at the final waypoint outputs
    zero velocities.
    """
    if state.halted:
        return 0.0, 0.0
    plan = state.plan
    tol = state.params.arrival_tol
    while (
        plan.cursor < plan.final_index
        and abs(pose.x - plan.waypoints[plan.cursor][0]) <= tol
    ):
        plan.cursor += 1
    target_x = plan.waypoints[plan.cursor][0]
    if plan.cursor == plan.final_index and abs(pose.x - target_x) <= tol:
        return 0.0, 0.0
    e = heading_error(pose, (target_x, state.commanded_y))
    return state.params.v0, state.params.kp * e
