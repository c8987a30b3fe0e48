#!/usr/bin/env python3
"""Run every bundled scenario and summarize; optionally plot trajectories."""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from gestureswarm.config import setup_from_dict
from gestureswarm.core import PHYSICAL_LATENCY, PHYSICAL_V0_FACTOR
from gestureswarm.engine import load_script, run_scenario
from gestureswarm.runlog import write_run_outputs

ROOT = Path(__file__).resolve().parents[1]


def physical_variant(setup):
    setup = dataclasses.replace(setup, latency=PHYSICAL_LATENCY)
    return dataclasses.replace(
        setup,
        params=dataclasses.replace(setup.params, v0=setup.params.v0 * PHYSICAL_V0_FACTOR),
    )


RUNS = [
    ("testbed1", {"testbed": 1}, "testbed1.json", False),
    ("testbed2", {"testbed": 2}, "testbed2.json", False),
    ("testbed3", {"testbed": 3}, "testbed3.json", False),
    ("testbed3_physical", {"testbed": 3}, "testbed3_physical.json", True),
]


def plot(report, setup, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 8 * setup.arena.height / setup.arena.width))
    for wall in setup.arena.walls:
        ax.add_patch(
            plt.Rectangle(
                (wall.cx - wall.sx / 2, wall.cy - wall.sy / 2),
                wall.sx, wall.sy, color="0.3",
            )
        )
    tracks: dict[int, list[tuple[float, float]]] = {}
    for _tick, rid, x, y, _phi, _halted in report.trajectory:
        tracks.setdefault(rid, []).append((x, y))
    for rid, points in sorted(tracks.items()):
        xs, ys = zip(*points)
        ax.plot(xs, ys, label=f"robot {rid}")
        ax.plot(xs[0], ys[0], "o", color="k", ms=4)
    ax.axvline(setup.swarm.x_goal, ls="--", color="g", lw=1, label="goal")
    ax.set_xlim(0, setup.arena.width)
    ax.set_ylim(-setup.arena.height / 2, setup.arena.height / 2)
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.legend(loc="upper right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=ROOT / "out")
    parser.add_argument("--plot", action="store_true", help="write trajectory PNGs")
    args = parser.parse_args()

    failures = 0
    for name, doc, script_name, physical in RUNS:
        setup = setup_from_dict(doc)
        if physical:
            setup = physical_variant(setup)
        script = load_script(ROOT / "scenarios" / script_name)
        report = run_scenario(setup, script, max_time=240.0)
        out_dir = write_run_outputs(report, args.out / name)
        status = "ok" if report.completed and not report.collisions else "FAIL"
        if status == "FAIL":
            failures += 1
        print(
            f"{name:18s} {status}  completed={report.completed} "
            f"t={report.completion_time} collisions={len(report.collisions)} -> {out_dir}"
        )
        if args.plot:
            plot(report, setup, args.out / name / "trajectory.png")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
