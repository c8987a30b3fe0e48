#!/usr/bin/env python3
"""Generate the bundled gesture scripts in scenarios/.

The operator timing is position-triggered (stop when the formation
nears an opening, expand once everyone is through), so each script is
built by deterministic refinement: simulate with the entries so far,
read the trigger crossing time from the trajectory, append the next
bracket, repeat. Causality keeps every earlier segment identical, so
the final time-table reproduces the closed-loop run exactly.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from gestureswarm.config import RunSetup, setup_from_dict
from gestureswarm.core import Gesture, PHYSICAL_LATENCY, PHYSICAL_V0_FACTOR
from gestureswarm.engine import ScriptEntry, run_scenario, tick_label

SPACING = 1.0  # seconds between gestures within a bracket


@dataclasses.dataclass
class Stage:
    trigger_x: float      # fire when agg(robot x) crosses this value
    agg: callable         # max = lead robot, min = whole swarm through
    gestures: list[str]   # the bracket, in order


def bracket(kind: str, steps: int) -> list[str]:
    middle = ["Fist", kind] * steps
    return ["Palm", *middle, "Peace"]


STAGES = {
    1: [
        # three openings in series: 2.0 m, 1.0 m, 2.0 m at x = 2, 4, 6
        Stage(1.1, max, bracket("C", 3)),   # 1.5 -> 0.75 for the first gap
        Stage(2.6, max, bracket("C", 2)),   # 0.75 -> 0.25 for the small gap
        Stage(4.3, min, bracket("L", 2)),   # back out to 0.75
        Stage(6.3, min, bracket("L", 3)),   # restore 1.5
    ],
    2: [
        # one small opening mid-arena: a single five-fold concatenation
        Stage(1.1, max, bracket("C", 5)),
        Stage(4.3, min, bracket("L", 5)),
    ],
    3: [
        Stage(0.6, max, bracket("C", 1)),
        Stage(1.6, min, bracket("L", 1)),
    ],
}


def crossing_time(report, threshold: float, agg) -> float:
    by_tick: dict[int, list[float]] = {}
    for tick, _rid, x, *_ in report.trajectory:
        by_tick.setdefault(tick, []).append(x)
    for tick in sorted(by_tick):
        if agg(by_tick[tick]) >= threshold:
            return float(tick_label(tick, report.dt))
    raise RuntimeError(f"x={threshold} never reached; scenario needs more time")


def build_entries(setup: RunSetup, stages: list[Stage], max_time: float) -> list[dict]:
    entries: list[tuple[float, str]] = [(0.0, "Peace")]

    def to_script(pairs):
        return [ScriptEntry(t, Gesture.from_name(g)) for t, g in pairs]

    for stage in stages:
        report = run_scenario(setup, to_script(entries), max_time=max_time)
        t0 = crossing_time(report, stage.trigger_x, stage.agg)
        entries += [
            (t0 + i * SPACING, g) for i, g in enumerate(stage.gestures)
        ]
    final = run_scenario(setup, to_script(entries), max_time=max_time)
    status = "completed" if final.completed else "incomplete"
    print(
        f"  {status} at t={final.completion_time}s, "
        f"{len(final.collisions)} collisions, {len(entries)} gestures"
    )
    if final.collisions or not final.completed:
        raise RuntimeError("generated scenario does not run clean; adjust stages")
    return [{"t": t, "gesture": g} for t, g in entries]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out", type=Path, default=Path(__file__).resolve().parents[1] / "scenarios"
    )
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)

    for testbed, stages in STAGES.items():
        print(f"testbed {testbed}:")
        setup = setup_from_dict({"testbed": testbed})
        doc = build_entries(setup, stages, max_time=240.0)
        path = args.out / f"testbed{testbed}.json"
        path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        print(f"  wrote {path}")

    # physical-mode variant of the small arena: 0.5 s latency, halved v0
    print("testbed 3 (physical preset):")
    base = setup_from_dict({"testbed": 3, "latency": PHYSICAL_LATENCY})
    physical = dataclasses.replace(
        base, params=dataclasses.replace(base.params, v0=base.params.v0 * PHYSICAL_V0_FACTOR)
    )
    doc = build_entries(physical, STAGES[3], max_time=240.0)
    path = args.out / "testbed3_physical.json"
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"  wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
