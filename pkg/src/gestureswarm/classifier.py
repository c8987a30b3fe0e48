"""Silhouette gesture classifier.

The live recognition network is deliberately out of scope; this module
provides the pluggable classification surface with a desk-scale
baseline: the seven Hu moment invariants of the foreground, matched
against per-gesture centroids by Euclidean distance. Hu invariants are
unchanged by translation and (up to rasterization) by scale, which is
exactly the robustness the silhouette pipeline needs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Protocol

import numpy as np

from .core import DimensionError, Gesture
from .images import NET_SIZE, BinaryImage
from .silhouettes import sample_set

DEFAULT_AREA_FLOOR = 500        # foreground pixels below this classify as NONE
_DESCRIPTOR_SCALE = 1e-7        # asinh knee; invariants below this flatten to ~0
_SOFTMIN_TEMPERATURE = 1.0


class GestureClassifier(Protocol):
    """Anything that labels a 240x240 silhouette with a confidence."""

    def classify(self, img: BinaryImage) -> tuple[Gesture, float]: ...


def hu_moments(img: BinaryImage) -> np.ndarray:
    """The seven Hu moment invariants of the foreground pixel set.

    Coordinates follow image convention (x = column, y = row). Raises if
    the image has no foreground.
    """
    ys, xs = np.nonzero(img.bits)
    m00 = float(xs.size)
    if m00 == 0.0:
        raise ValueError("Hu moments are undefined for an empty foreground")
    x = xs - xs.mean()
    y = ys - ys.mean()

    def eta(p: int, q: int) -> float:
        mu = float(np.sum(x**p * y**q))
        return mu / m00 ** (1 + (p + q) / 2)

    n20, n02, n11 = eta(2, 0), eta(0, 2), eta(1, 1)
    n30, n03 = eta(3, 0), eta(0, 3)
    n21, n12 = eta(2, 1), eta(1, 2)

    a = n30 + n12
    b = n21 + n03
    c = n30 - 3 * n12
    d = 3 * n21 - n03

    h1 = n20 + n02
    h2 = (n20 - n02) ** 2 + 4 * n11**2
    h3 = c**2 + d**2
    h4 = a**2 + b**2
    h5 = c * a * (a**2 - 3 * b**2) + d * b * (3 * a**2 - b**2)
    h6 = (n20 - n02) * (a**2 - b**2) + 4 * n11 * a * b
    h7 = d * a * (a**2 - 3 * b**2) - c * b * (3 * a**2 - b**2)
    return np.array([h1, h2, h3, h4, h5, h6, h7])


def descriptor(img: BinaryImage) -> np.ndarray:
    """Log-compressed Hu invariants, stable through the near-zero range."""
    return np.arcsinh(hu_moments(img) / _DESCRIPTOR_SCALE) / math.log(10.0)


@dataclass
class CentroidClassifier:
    """Nearest-centroid over Hu-moment descriptors."""

    centroids: dict[Gesture, np.ndarray]
    area_floor: int = DEFAULT_AREA_FLOOR
    temperature: float = _SOFTMIN_TEMPERATURE

    @classmethod
    def fit(
        cls,
        samples: Iterable[tuple[Gesture, BinaryImage]],
        area_floor: int = DEFAULT_AREA_FLOOR,
    ) -> "CentroidClassifier":
        """Fit one centroid per gesture from labelled silhouettes."""
        by_class: dict[Gesture, list[np.ndarray]] = {}
        for gesture, img in samples:
            by_class.setdefault(gesture, []).append(descriptor(img))
        if not by_class:
            raise ValueError("cannot fit a classifier on an empty sample set")
        centroids = {g: np.mean(vecs, axis=0) for g, vecs in by_class.items()}
        return cls(centroids=centroids, area_floor=area_floor)

    def classify(self, img: BinaryImage) -> tuple[Gesture, float]:
        """Label a 240x240 silhouette; returns (gesture, confidence)."""
        if (img.width, img.height) != (NET_SIZE, NET_SIZE):
            raise DimensionError(
                f"classifier input must be {NET_SIZE}x{NET_SIZE}, "
                f"got {img.width}x{img.height}"
            )
        if img.area < self.area_floor:
            return Gesture.NONE, 1.0
        vec = descriptor(img)
        gestures = list(self.centroids)
        dists = np.array([np.linalg.norm(vec - self.centroids[g]) for g in gestures])
        weights = np.exp(-(dists - dists.min()) / self.temperature)
        best = int(np.argmin(dists))
        return gestures[best], float(weights[best] / weights.sum())

    def save(self, path: str | Path) -> None:
        doc = {
            "area_floor": self.area_floor,
            "temperature": self.temperature,
            "descriptor_scale": _DESCRIPTOR_SCALE,
            "centroids": {g.value: list(map(float, v)) for g, v in self.centroids.items()},
        }
        Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "CentroidClassifier":
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        centroids = {
            Gesture.from_name(name): np.asarray(vec, dtype=float)
            for name, vec in doc["centroids"].items()
        }
        return cls(
            centroids=centroids,
            area_floor=int(doc["area_floor"]),
            temperature=float(doc["temperature"]),
        )


@lru_cache(maxsize=1)
def default_classifier() -> CentroidClassifier:
    """The baseline classifier fitted on the bundled synthetic set."""
    return CentroidClassifier.fit(sample_set())
