"""Raster types, file I/O, frame preprocessing, and dataset augmentation.

Images are numpy arrays in row-major (height, width) order. Grayscale
pixels are uint8 intensities in [0, 255]; binary pixels are uint8 bits
in {0, 1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image
from scipy.ndimage import gaussian_filter

from .core import DimensionError

FRAME_WIDTH, FRAME_HEIGHT = 640, 480        # live webcam frames
DATASET_WIDTH, DATASET_HEIGHT = 640, 576    # archived dataset stills
FRAME_CROP = 480
DATASET_CROP = 570
NET_SIZE = 240                              # classifier input size

DEFAULT_BLUR_SIGMA = 1.0
DEFAULT_THRESHOLD = 128


@dataclass(frozen=True, eq=False)
class GrayImage:
    """Grayscale raster; pixels is a (height, width) uint8 array."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.ndim != 2:
            raise DimensionError(f"expected a 2-d pixel array, got shape {px.shape}")
        object.__setattr__(self, "pixels", px.astype(np.uint8, copy=False))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True, eq=False)
class BinaryImage:
    """Binary raster; bits is a (height, width) uint8 array of {0, 1}."""

    bits: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.bits)
        if b.ndim != 2:
            raise DimensionError(f"expected a 2-d bit array, got shape {b.shape}")
        b = b.astype(np.uint8, copy=False)
        if b.size and b.max() > 1:
            raise ValueError("binary image may only contain 0 and 1")
        object.__setattr__(self, "bits", b)

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def area(self) -> int:
        """Number of foreground pixels."""
        return int(self.bits.sum())


def load_gray(path: str | Path) -> GrayImage:
    with Image.open(path) as im:
        return GrayImage(np.asarray(im.convert("L")))


def load_binary(path: str | Path, threshold: int = DEFAULT_THRESHOLD) -> BinaryImage:
    gray = load_gray(path)
    return BinaryImage((gray.pixels >= threshold).astype(np.uint8))


def save_gray(img: GrayImage, path: str | Path) -> None:
    Image.fromarray(img.pixels, mode="L").save(path)


def save_binary(img: BinaryImage, path: str | Path) -> None:
    Image.fromarray(img.bits * np.uint8(255), mode="L").save(path)


def _resize_bilinear(a: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Bilinear resample with pixel-center alignment; returns float64."""
    in_h, in_w = a.shape
    ys = (np.arange(out_h) + 0.5) * (in_h / out_h) - 0.5
    xs = (np.arange(out_w) + 0.5) * (in_w / out_w) - 0.5
    y0 = np.floor(ys).astype(int)
    x0 = np.floor(xs).astype(int)
    wy = (ys - y0)[:, None]
    wx = (xs - x0)[None, :]
    y0c, y1c = np.clip(y0, 0, in_h - 1), np.clip(y0 + 1, 0, in_h - 1)
    x0c, x1c = np.clip(x0, 0, in_w - 1), np.clip(x0 + 1, 0, in_w - 1)
    af = a.astype(np.float64)
    top = af[np.ix_(y0c, x0c)] * (1 - wx) + af[np.ix_(y0c, x1c)] * wx
    bot = af[np.ix_(y1c, x0c)] * (1 - wx) + af[np.ix_(y1c, x1c)] * wx
    return top * (1 - wy) + bot * wy


def _center_crop(a: np.ndarray, crop_h: int, crop_w: int) -> np.ndarray:
    h, w = a.shape
    top = (h - crop_h) // 2
    left = (w - crop_w) // 2
    return a[top:top + crop_h, left:left + crop_w]


def _require_size(pixels: np.ndarray, width: int, height: int, what: str) -> None:
    h, w = pixels.shape
    if (w, h) != (width, height):
        raise DimensionError(f"{what} must be {width}x{height}, got {w}x{h}")


def preprocess_frame(
    frame: GrayImage,
    blur_sigma: float = DEFAULT_BLUR_SIGMA,
    threshold: int = DEFAULT_THRESHOLD,
) -> BinaryImage:
    """Turn a 640x480 camera frame into a 240x240 silhouette.

    Center-crops to 480x480, scales bilinearly to 240x240, blurs with a
    Gaussian of the given sigma, then thresholds (bit = 1 where the
    blurred intensity >= threshold).
    """
    _require_size(frame.pixels, FRAME_WIDTH, FRAME_HEIGHT, "camera frame")
    a = _center_crop(frame.pixels, FRAME_CROP, FRAME_CROP)
    a = _resize_bilinear(a, NET_SIZE, NET_SIZE)
    a = gaussian_filter(a, sigma=blur_sigma)
    return BinaryImage((a >= threshold).astype(np.uint8))


def preprocess_dataset_image(img: GrayImage) -> GrayImage:
    """Turn a 640x576 dataset still into a 240x240 grayscale image.

    Center-crops to 570x570 and scales bilinearly to 240x240.
    """
    _require_size(img.pixels, DATASET_WIDTH, DATASET_HEIGHT, "dataset image")
    a = _center_crop(img.pixels, DATASET_CROP, DATASET_CROP)
    a = _resize_bilinear(a, NET_SIZE, NET_SIZE)
    return GrayImage(np.clip(np.rint(a), 0, 255).astype(np.uint8))


def augment(img: BinaryImage) -> list[BinaryImage]:
    """Generate the seven derived images of a square silhouette.

    Fixed order: the horizontal mirror H, then for each of {original, H}
    the 90-degree clockwise rotation, the 90-degree counter-clockwise
    rotation, and the upside-down flip.
    """
    if img.width != img.height:
        raise DimensionError(
            f"augmentation requires a square image, got {img.width}x{img.height}"
        )
    out = []
    mirrored = img.bits[:, ::-1]
    out.append(mirrored)
    for base in (img.bits, mirrored):
        out.append(np.rot90(base, k=-1))   # 90 degrees clockwise
        out.append(np.rot90(base, k=1))    # 90 degrees counter-clockwise
        out.append(base[::-1, :])          # upside-down
    return [BinaryImage(np.ascontiguousarray(a)) for a in out]


def generate_none_samples(
    count: int,
    noise_fraction: float,
    rng_seed: int,
    size: int = NET_SIZE,
    noise_z: float = 2.5,
) -> list[BinaryImage]:
    """Blank training images for the no-gesture class.

    A ``noise_fraction`` share carries sparse thresholded Gaussian noise
    (standard-normal field, bit = 1 above ``noise_z``); the rest are
    all-zero. Deterministic for a fixed seed.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    if not 0.0 <= noise_fraction <= 1.0:
        raise ValueError("noise_fraction must be in [0, 1]")
    n_noisy = round(count * noise_fraction)
    rng = np.random.default_rng(rng_seed)
    samples = []
    for i in range(count):
        if i < n_noisy:
            field = rng.standard_normal((size, size))
            samples.append(BinaryImage((field > noise_z).astype(np.uint8)))
        else:
            samples.append(BinaryImage(np.zeros((size, size), dtype=np.uint8)))
    return samples
