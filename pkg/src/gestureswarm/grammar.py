"""Sequential-gesture state machine.

Palm (stop) and Peace (resume) act alone; everything else forms a
bracketed sequence: Palm opens the bracket, Fist announces a cohesion
modifier, C or L selects the direction, and Peace releases the
accumulated steps and resumes motion. Brackets may carry several
Fist-C / Fist-L pairs, so a double contraction is
Palm-Fist-C-Fist-C-Peace rather than two full sequences.

Invalid gestures for the current mode are ignored with a logged notice:
a fumbled or misclassified gesture must never corrupt the swarm.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Iterable

from .core import BETA_DECREASE, BETA_INCREASE, Gesture, SwarmCommand
from .debounce import GestureEvent

log = logging.getLogger(__name__)


class Mode(enum.Enum):
    MOVING = "Moving"
    STOPPED = "Stopped"
    AWAIT_MODIFIER = "AwaitModifier"


@dataclass(frozen=True)
class GrammarState:
    mode: Mode = Mode.MOVING
    pending: tuple[int, ...] = ()   # beta values accumulated since the last Palm

    def __post_init__(self):
        if self.mode is Mode.MOVING and self.pending:
            raise ValueError("pending steps cannot survive into Moving mode")


def step(state: GrammarState, event: GestureEvent) -> tuple[GrammarState, list[SwarmCommand]]:
    """Advance the grammar by one gesture event.

    Returns the next state and the commands released by this event.
    Sequencing errors are never fatal; they leave the state unchanged.
    """
    g = event.gesture
    if g is Gesture.NONE:
        return state, []
    if g is Gesture.PALM:
        return GrammarState(Mode.STOPPED), [SwarmCommand.stop()]
    if state.mode is Mode.STOPPED:
        if g is Gesture.PEACE:
            released = [SwarmCommand.cohesion_step(b) for b in state.pending]
            released.append(SwarmCommand.resume())
            return GrammarState(Mode.MOVING), released
        if g is Gesture.FIST:
            return GrammarState(Mode.AWAIT_MODIFIER, state.pending), []
    elif state.mode is Mode.AWAIT_MODIFIER:
        if g is Gesture.C:
            return GrammarState(Mode.STOPPED, state.pending + (BETA_INCREASE,)), []
        if g is Gesture.L:
            return GrammarState(Mode.STOPPED, state.pending + (BETA_DECREASE,)), []
    log.debug("ignored gesture %s in mode %s", g.value, state.mode.value)
    return state, []


def parse_sequence(events: Iterable[GestureEvent]) -> list[SwarmCommand]:
    """Fold step over a list of events, starting from Moving."""
    state = GrammarState()
    commands: list[SwarmCommand] = []
    for event in events:
        state, released = step(state, event)
        commands.extend(released)
    return commands
