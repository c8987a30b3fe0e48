"""Parametric hand silhouettes for fitting and exercising the classifier.

Each gesture is modelled as a union of analytic primitives (discs,
annular arcs, bars, finger prongs) in a unit frame, rasterized at a
randomized scale and position. The generated set stands in for an
archived silhouette corpus and keeps every downstream check
deterministic under a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Gesture
from .images import NET_SIZE, BinaryImage

# Shape gestures the generator can draw (everything except NONE).
SHAPE_GESTURES = (
    Gesture.C,
    Gesture.FIST,
    Gesture.L,
    Gesture.OK,
    Gesture.PEACE,
    Gesture.PALM,
)


@dataclass(frozen=True)
class _Disc:
    cx: float
    cy: float
    r: float

    def mask(self, x, y):
        return (x - self.cx) ** 2 + (y - self.cy) ** 2 <= self.r**2


@dataclass(frozen=True)
class _Ring:
    cx: float
    cy: float
    r_in: float
    r_out: float
    gap_center: float | None = None   # radians; None = full ring
    gap_half: float = 0.0

    def mask(self, x, y):
        dx = x - self.cx
        dy = y - self.cy
        rr = dx**2 + dy**2
        m = (rr >= self.r_in**2) & (rr <= self.r_out**2)
        if self.gap_center is not None:
            ang = np.arctan2(dy, dx)
            diff = np.abs(np.arctan2(np.sin(ang - self.gap_center), np.cos(ang - self.gap_center)))
            m &= diff > self.gap_half
        return m


@dataclass(frozen=True)
class _Bar:
    """Axis-aligned rectangle given by its corner spans."""

    x0: float
    x1: float
    y0: float
    y1: float

    def mask(self, x, y):
        return (x >= self.x0) & (x <= self.x1) & (y >= self.y0) & (y <= self.y1)


@dataclass(frozen=True)
class _Prong:
    """Finger: a rectangle of given length/width pointing along a direction."""

    ax: float
    ay: float
    angle: float   # radians, 0 = +x, pi/2 = up
    length: float
    width: float

    def mask(self, x, y):
        c, s = math.cos(self.angle), math.sin(self.angle)
        dx = x - self.ax
        dy = y - self.ay
        u = dx * c + dy * s
        v = -dx * s + dy * c
        return (u >= 0) & (u <= self.length) & (np.abs(v) <= 0.5 * self.width)


def _fan(cx: float, cy: float, angles_deg, length: float, width: float):
    return tuple(
        _Prong(cx, cy, math.radians(a), length, width) for a in angles_deg
    )


# Primitive layouts in a unit frame (y up, everything within radius 1).
_LAYOUTS = {
    Gesture.FIST: (_Disc(0.0, 0.0, 0.62),),
    Gesture.PEACE: (
        _Disc(0.0, -0.38, 0.40),
        *_fan(0.0, -0.38, (75, 105), 1.18, 0.17),
    ),
    Gesture.PALM: (
        _Disc(0.0, -0.42, 0.50),
        *_fan(0.0, -0.42, (50, 70, 90, 110, 130), 1.18, 0.15),
    ),
    Gesture.C: (
        _Ring(0.0, 0.0, 0.38, 0.68, gap_center=0.0, gap_half=math.radians(38)),
    ),
    Gesture.L: (
        _Bar(-0.62, -0.32, -0.62, 0.62),
        _Bar(-0.62, 0.62, -0.62, -0.32),
    ),
    Gesture.OK: (
        _Ring(0.0, -0.40, 0.34, 0.55),
        *_fan(0.0, -0.40, (60, 90, 120), 1.02, 0.15),
    ),
}


def draw_silhouette(
    gesture: Gesture,
    scale: float,
    center: tuple[float, float],
    size: int = NET_SIZE,
) -> BinaryImage:
    """Rasterize one gesture silhouette.

    ``scale`` is the shape radius in pixels; ``center`` is (cx, cy) in
    image coordinates (x = column, y = row, y growing downward).
    """
    if gesture not in _LAYOUTS:
        raise ValueError(f"no silhouette layout for gesture {gesture.value}")
    cols = np.arange(size, dtype=np.float64)
    rows = np.arange(size, dtype=np.float64)
    x, y = np.meshgrid(cols, rows)
    # Unit frame: y up, origin at the shape center.
    ux = (x - center[0]) / scale
    uy = (center[1] - y) / scale
    m = np.zeros((size, size), dtype=bool)
    for prim in _LAYOUTS[gesture]:
        m |= prim.mask(ux, uy)
    return BinaryImage(m.astype(np.uint8))


def sample_set(
    per_class: int = 20,
    seed: int = 0,
    size: int = NET_SIZE,
    scale_range: tuple[float, float] = (55.0, 80.0),
    center_jitter: float = 10.0,
) -> list[tuple[Gesture, BinaryImage]]:
    """Draw ``per_class`` silhouettes of every shape gesture.

    Scale and position are randomized per sample; the margin left by the
    default ranges keeps every silhouette at least 25 px clear of the
    frame border, so modest translations stay in frame.
    """
    rng = np.random.default_rng(seed)
    mid = (size - 1) / 2.0
    samples = []
    for gesture in SHAPE_GESTURES:
        for _ in range(per_class):
            scale = rng.uniform(*scale_range)
            cx = mid + rng.uniform(-center_jitter, center_jitter)
            cy = mid + rng.uniform(-center_jitter, center_jitter)
            samples.append((gesture, draw_silhouette(gesture, scale, (cx, cy), size)))
    return samples
