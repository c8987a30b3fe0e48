"""Debounced, edge-triggered gesture event stream.

Raw classifier output arrives as (gesture, timestamp) pairs at the
camera rate. Publishing every classification floods the swarm with
transition-frame noise, so the stream is rate-limited to one event per
interval and an event fires only when the gesture differs from the last
one emitted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .core import Gesture, StreamOrderError

DEFAULT_DEBOUNCE_INTERVAL = 0.5


@dataclass(frozen=True)
class GestureEvent:
    gesture: Gesture
    timestamp: float


class Debouncer:
    """Single-owner stateful stream transformer; not thread-safe.

    The emitted-gesture memory starts at NONE, so an idle classifier
    (reporting NONE with no hand in frame) stays silent until a real
    gesture appears.
    """

    def __init__(self, interval: float = DEFAULT_DEBOUNCE_INTERVAL):
        if interval <= 0:
            raise ValueError("debounce interval must be > 0")
        self.interval = interval
        self._last_seen_t: float | None = None
        self._last_emit_t: float | None = None
        self._last_emitted = Gesture.NONE

    def feed(self, gesture: Gesture, timestamp: float) -> GestureEvent | None:
        """Offer one raw classification; returns an event or None."""
        if self._last_seen_t is not None and timestamp < self._last_seen_t:
            raise StreamOrderError(
                f"timestamps must be non-decreasing ({timestamp} after {self._last_seen_t})"
            )
        self._last_seen_t = timestamp
        if self._last_emit_t is not None and timestamp - self._last_emit_t < self.interval:
            return None
        if gesture is self._last_emitted:
            return None
        self._last_emit_t = timestamp
        self._last_emitted = gesture
        return GestureEvent(gesture, timestamp)


def debounce(
    raw: Iterable[tuple[Gesture, float]],
    interval: float = DEFAULT_DEBOUNCE_INTERVAL,
) -> Iterator[GestureEvent]:
    """Debounce a whole raw stream (batch form of Debouncer)."""
    d = Debouncer(interval)
    for gesture, t in raw:
        event = d.feed(gesture, t)
        if event is not None:
            yield event
