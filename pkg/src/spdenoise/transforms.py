"""Orthonormal 2-D transforms: type-II DCT and periodic orthogonal wavelets.

Coefficient grids are plain float64 ndarrays of shape ``(height, width)``.
Separable transforms are applied along rows (axis 1) first, then along
columns (axis 0).

The wavelet analysis for a length-``n`` axis is an explicit ``n x n``
orthogonal matrix built from the filter with periodic wrap-around, so the
inverse is its transpose and Parseval holds to rounding error.  Multi-level
decompositions recurse on the low-low quadrant in the usual Mallat layout
(approximation top-left).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import fft

SQRT2 = np.sqrt(2.0)
SQRT3 = np.sqrt(3.0)

HAAR_LOWPASS = np.array([1.0, 1.0]) / SQRT2
# Daubechies 4-tap (two vanishing moments)
DB4_LOWPASS = np.array([1 + SQRT3, 3 + SQRT3, 3 - SQRT3, 1 - SQRT3]) / (4 * SQRT2)

_FILTERS = {"haar": HAAR_LOWPASS, "db4": DB4_LOWPASS}


@dataclass(frozen=True)
class TransformId:
    kind: str = "dct"
    levels: int = 1

    def __post_init__(self):
        if self.kind not in ("dct", "haar", "db4"):
            raise ValueError(f"unknown transform {self.kind!r}")
        if self.kind != "dct" and self.levels < 1:
            raise ValueError("wavelet levels must be a positive integer")

    def __str__(self):
        return "dct" if self.kind == "dct" else f"{self.kind}({self.levels})"

    def check_shape(self, shape: tuple[int, ...]) -> None:
        if len(shape) != 2 or min(shape) < 1:
            raise ValueError(f"expected a non-empty 2-D grid, got shape {shape}")
        if self.kind != "dct":
            step = 1 << self.levels
            h, w = shape
            if h % step or w % step:
                raise ValueError(
                    f"{self}: 2**{self.levels} must divide both dimensions, got {w}x{h}"
                )


DCT2D = TransformId("dct")


def dwt_haar(levels: int) -> TransformId:
    return TransformId("haar", levels)


def dwt_db4(levels: int) -> TransformId:
    return TransformId("db4", levels)


def parse_transform(name: str, levels: int = 4) -> TransformId:
    name = name.lower()
    if name in ("dct", "dct2d"):
        return DCT2D
    return TransformId(name, levels)


@lru_cache(maxsize=64)
def wavelet_matrix(kind: str, n: int) -> np.ndarray:
    """One-level periodic analysis matrix: rows ``[:n//2]`` lowpass, ``[n//2:]`` highpass."""
    h = _FILTERS[kind]
    taps = len(h)
    g = np.array([(-1) ** k * h[taps - 1 - k] for k in range(taps)])
    half = n // 2
    w = np.zeros((n, n))
    for k in range(half):
        for j in range(taps):
            col = (2 * k + j) % n
            w[k, col] += h[j]
            w[half + k, col] += g[j]
    w.setflags(write=False)
    return w


def _as_grid(x) -> np.ndarray:
    return np.array(x, dtype=np.float64, copy=True)


def _dwt_forward(kind: str, levels: int, x: np.ndarray) -> np.ndarray:
    out = x
    h, w = out.shape
    for _ in range(levels):
        block = out[:h, :w]
        block = block @ wavelet_matrix(kind, w).T  # rows
        block = wavelet_matrix(kind, h) @ block  # columns
        out[:h, :w] = block
        h //= 2
        w //= 2
    return out


def _dwt_inverse(kind: str, levels: int, c: np.ndarray) -> np.ndarray:
    out = c
    h, w = out.shape
    sizes = [(h >> lv, w >> lv) for lv in range(levels)]
    for h, w in reversed(sizes):
        block = out[:h, :w]
        block = wavelet_matrix(kind, h).T @ block
        block = block @ wavelet_matrix(kind, w)
        out[:h, :w] = block
    return out


def forward(t: TransformId, spatial) -> np.ndarray:
    """Spatial grid to coefficient grid (same shape)."""
    x = _as_grid(spatial)
    t.check_shape(x.shape)
    if t.kind == "dct":
        x = fft.dct(x, type=2, norm="ortho", axis=1)
        return fft.dct(x, type=2, norm="ortho", axis=0)
    return _dwt_forward(t.kind, t.levels, x)


def inverse(t: TransformId, coeffs) -> np.ndarray:
    """Coefficient grid back to the spatial domain."""
    c = _as_grid(coeffs)
    t.check_shape(c.shape)
    if t.kind == "dct":
        c = fft.idct(c, type=2, norm="ortho", axis=0)
        return fft.idct(c, type=2, norm="ortho", axis=1)
    return _dwt_inverse(t.kind, t.levels, c)


def hard_threshold(coeffs, t: float) -> np.ndarray:
    """Keep entries with ``|c| > t``; zero the rest (ties are zeroed)."""
    if not t >= 0:
        raise ValueError(f"threshold must be non-negative, got {t}")
    c = np.asarray(coeffs, dtype=np.float64)
    return np.where(np.abs(c) > t, c, 0.0)
