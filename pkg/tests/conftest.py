"""Shared fixtures: the obstacle-negotiation script builder.

The operator's timing is position-triggered (stop as the lead robot
nears the opening, expand only once every robot has cleared it), while
scripts are time-tables. The builder recovers the trigger times by
deterministic refinement: run with the script built so far, read the
crossing time from the trajectory, append the next bracket. Causality
makes each refinement preserve the earlier motion exactly.
"""

from __future__ import annotations

import pytest

from gestureswarm.config import RunSetup, setup_from_dict
from gestureswarm.core import Gesture
from gestureswarm.engine import RunReport, ScriptEntry, run_scenario, tick_label


def as_script(entries: list[tuple[float, str]]) -> list[ScriptEntry]:
    return [ScriptEntry(t, Gesture.from_name(name)) for t, name in entries]


def crossing_time(report: RunReport, threshold: float, agg=max) -> float:
    """First trajectory time at which agg(robot x values) reaches threshold."""
    by_tick: dict[int, list[float]] = {}
    for tick, _rid, x, _y, _phi, _halted in report.trajectory:
        by_tick.setdefault(tick, []).append(x)
    for tick in sorted(by_tick):
        if agg(by_tick[tick]) >= threshold:
            return float(tick_label(tick, report.dt))
    raise AssertionError(f"threshold x={threshold} never reached")


def build_gate_script(
    setup: RunSetup,
    contract_at: float,
    expand_at: float,
    spacing: float = 1.0,
    max_time: float = 120.0,
) -> list[tuple[float, str]]:
    """Fig.-style single-opening protocol for the given setup.

    Peace at t=0; Palm,Fist,C,Peace spaced ``spacing`` apart once the
    lead x reaches ``contract_at``; Palm,Fist,L,Peace once every robot
    has passed ``expand_at``.
    """
    entries: list[tuple[float, str]] = [(0.0, "Peace")]
    r0 = run_scenario(setup, as_script(entries), max_time=max_time)
    t1 = crossing_time(r0, contract_at, agg=max)
    entries += [(t1, "Palm"), (t1 + spacing, "Fist"),
                (t1 + 2 * spacing, "C"), (t1 + 3 * spacing, "Peace")]
    r1 = run_scenario(setup, as_script(entries), max_time=max_time)
    t2 = crossing_time(r1, expand_at, agg=min)
    entries += [(t2, "Palm"), (t2 + spacing, "Fist"),
                (t2 + 2 * spacing, "L"), (t2 + 3 * spacing, "Peace")]
    return entries


@pytest.fixture(scope="session")
def testbed3_setup() -> RunSetup:
    return setup_from_dict({"testbed": 3})


@pytest.fixture(scope="session")
def fig3_entries(testbed3_setup) -> list[tuple[float, str]]:
    return build_gate_script(testbed3_setup, contract_at=0.6, expand_at=1.6)


@pytest.fixture(scope="session")
def fig3_report(testbed3_setup, fig3_entries) -> RunReport:
    return run_scenario(testbed3_setup, as_script(fig3_entries), max_time=60.0)
