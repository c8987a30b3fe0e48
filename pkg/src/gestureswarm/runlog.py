"""Run artifacts on disk: trajectory CSV, command CSV, summary JSON.

Timestamps are written as exact decimal multiples of dt; pose numbers
use shortest-round-trip float formatting, so a written log replays to
bit-identical values.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

from .config import RunSetup
from .core import CommandKind, Pose
from .engine import CollisionEvent, RunReport, check_collision, tick_label

TRAJECTORY_FILE = "trajectory.csv"
COMMANDS_FILE = "commands.csv"
REPORT_FILE = "report.json"
GESTURES_FILE = "gestures.json"


def write_trajectory_csv(report: RunReport, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "robot_id", "x", "y", "phi", "halted"])
        for tick, robot_id, x, y, phi, halted in report.trajectory:
            w.writerow(
                [tick_label(tick, report.dt), robot_id, repr(x), repr(y), repr(phi), int(halted)]
            )


def write_commands_csv(report: RunReport, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["t_issued", "t_delivered", "command", "beta"])
        for rec in report.commands:
            w.writerow(
                [
                    tick_label(rec.issued_tick, report.dt),
                    "" if rec.delivered_tick is None else tick_label(rec.delivered_tick, report.dt),
                    rec.command.kind.value,
                    "" if rec.command.beta is None else rec.command.beta,
                ]
            )


def write_gesture_timeline(report: RunReport, path: str | Path) -> None:
    """Record the raw injected gestures as a replayable script."""
    doc = [
        {"t": float(tick_label(tick, report.dt)), "gesture": g.value}
        for tick, g in report.gesture_timeline
    ]
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def write_run_outputs(report: RunReport, out_dir: str | Path) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_trajectory_csv(report, out / TRAJECTORY_FILE)
    write_commands_csv(report, out / COMMANDS_FILE)
    write_gesture_timeline(report, out / GESTURES_FILE)
    (out / REPORT_FILE).write_text(report.summary_json(), encoding="utf-8")
    return out


def read_trajectory_csv(path: str | Path) -> list[dict]:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            rows.append(
                {
                    "t": row["t"],
                    "robot_id": int(row["robot_id"]),
                    "x": float(row["x"]),
                    "y": float(row["y"]),
                    "phi": float(row["phi"]),
                    "halted": bool(int(row["halted"])),
                }
            )
    if not rows:
        raise ValueError(f"{path}: empty trajectory log")
    return rows


def replay_summary(rows: list[dict], setup: RunSetup) -> dict:
    """Recompute the run summary from a trajectory log alone."""
    by_time: dict[str, dict[int, dict]] = {}
    for row in rows:
        by_time.setdefault(row["t"], {})[row["robot_id"]] = row
    times = sorted(by_time, key=float)
    tol = setup.params.arrival_tol
    goal = setup.swarm.x_goal

    collisions = []
    completed = False
    completion_time = None
    final_rows = by_time[times[-1]]
    for t in times:
        robots = by_time[t]
        for robot_id in sorted(robots):
            row = robots[robot_id]
            pose = Pose(row["x"], row["y"], row["phi"])
            if float(t) > 0:
                wall = check_collision(setup.arena, pose, setup.params.radius)
                if wall is not None:
                    collisions.append({"t": float(t), "robot_id": robot_id, "wall_index": wall})
        if not completed and all(
            abs(r["x"] - goal) <= tol for r in robots.values()
        ):
            completed = True
            completion_time = float(t)
    return {
        "completed": completed,
        "completion_time": completion_time,
        "collisions": collisions,
        "final_poses": [
            {"x": final_rows[i]["x"], "y": final_rows[i]["y"], "phi": final_rows[i]["phi"]}
            for i in sorted(final_rows)
        ],
    }
