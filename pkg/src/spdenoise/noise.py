"""Corruption models: salt-and-pepper impulses, erasures, transmitter sparsification."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .image import MAX_VALUE, Image, SampleMask
from .rng import Rng
from .transforms import TransformId, forward, inverse


def round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def corrupted_count(ratio: float, n: int) -> int:
    """Number of positions hit for a given ratio: ``round_half_up(ratio * n)``."""
    return min(n, round_half_up(ratio * n))


def _check_unit(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {value}")


@dataclass(frozen=True)
class NoiseSpec:
    ratio: float
    salt_fraction: float = 0.5
    seed: int = 0

    def __post_init__(self):
        _check_unit("ratio", self.ratio)
        _check_unit("salt_fraction", self.salt_fraction)


def choose_positions(n: int, ratio: float, seed: int) -> np.ndarray:
    """Flat indices of ``corrupted_count(ratio, n)`` distinct positions, in draw order."""
    k = corrupted_count(ratio, n)
    return np.asarray(Rng(seed).sample_without_replacement(n, k), dtype=np.int64)


def inject_salt_pepper(img: Image, spec: NoiseSpec) -> Image:
    """Set a seeded random subset of pixels to 255 (salt) or 0 (pepper).

    The first ``round_half_up(salt_fraction * count)`` drawn positions get salt.
    """
    positions = choose_positions(img.size, spec.ratio, spec.seed)
    n_salt = round_half_up(spec.salt_fraction * len(positions))
    out = img.pixels.copy().ravel()
    out[positions[:n_salt]] = MAX_VALUE
    out[positions[n_salt:]] = 0
    return Image(out.reshape(img.shape))


def erase_samples(img: Image, ratio: float, seed: int = 0) -> tuple[Image, SampleMask]:
    """Drop a seeded random subset of pixels; erased pixels read 0 and are untrusted."""
    _check_unit("ratio", ratio)
    positions = choose_positions(img.size, ratio, seed)
    out = img.pixels.copy().ravel()
    out[positions] = 0
    trusted = np.ones(img.size, dtype=bool)
    trusted[positions] = False
    return Image(out.reshape(img.shape)), SampleMask(trusted.reshape(img.shape))


def keep_largest(coeffs: np.ndarray, keep: int) -> np.ndarray:
    """Zero all but the ``keep`` largest-magnitude entries.

    Equal magnitudes are ranked by row-major index, lower index first.
    """
    flat = coeffs.ravel()
    order = np.argsort(-np.abs(flat), kind="stable")
    out = np.zeros_like(flat)
    kept = order[:keep]
    out[kept] = flat[kept]
    return out.reshape(coeffs.shape)


def sparsify(img: Image, t: TransformId, keep_fraction: float) -> Image:
    """Transmitter-side sparsification: keep the top ``keep_fraction`` of coefficients."""
    if not 0.0 < keep_fraction <= 1.0:
        raise ValueError(f"keep_fraction must be in (0, 1], got {keep_fraction}")
    coeffs = forward(t, img.pixels)
    keep = max(1, round_half_up(keep_fraction * coeffs.size))
    spatial = inverse(t, keep_largest(coeffs, keep))
    return Image(np.clip(np.rint(spatial), 0, MAX_VALUE).astype(np.uint8))
