"""Fidelity metrics for 8-bit images."""

from __future__ import annotations

import math

import numpy as np

from .image import MAX_VALUE, Image


def _pixels(x) -> np.ndarray:
    return x.pixels if isinstance(x, Image) else np.asarray(x)


def mse(a, b) -> float:
    pa, pb = _pixels(a), _pixels(b)
    if pa.shape != pb.shape:
        raise ValueError(f"shape mismatch: {pa.shape} vs {pb.shape}")
    diff = pa.astype(np.float64) - pb.astype(np.float64)
    return float(np.mean(diff * diff))


def psnr_from_mse(err: float) -> float:
    if err == 0:
        return math.inf
    return 10.0 * math.log10(MAX_VALUE**2 / err)


def psnr(reference, test) -> float:
    """Peak signal-to-noise ratio in dB with peak 255; ``math.inf`` for identical images."""
    return psnr_from_mse(mse(reference, test))
