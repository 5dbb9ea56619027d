"""Iterative Method with Adaptive Thresholding (IMAT).

Reconstructs a transform-sparse grid from a subset of its spatial samples.
Starting from an all-zero coefficient estimate, each iteration

1. maps the current coefficients to the spatial domain,
2. overwrites the trusted positions with the observed samples,
3. maps back to the coefficient domain, and
4. hard-thresholds with ``beta * exp(-alpha * k)``, ``k = 0, 1, ...``.

The decaying threshold admits the strongest coefficients first and
progressively lets weaker ones in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .image import MAX_VALUE, Image, SampleMask
from .transforms import DCT2D, TransformId, forward, hard_threshold, inverse

DELTA_EPS = 1e-12
BETA_FACTOR = 1.05


@dataclass(frozen=True)
class ThresholdSchedule:
    """Exponentially decaying hard threshold ``beta * exp(-alpha * k)``.

    ``beta == 0`` is allowed as a degenerate schedule meaning "no thresholding".
    """

    beta: float
    alpha: float = 0.1

    def __post_init__(self):
        if not self.beta >= 0:
            raise ValueError(f"beta must be non-negative, got {self.beta}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    def threshold_at(self, k: int) -> float:
        return self.beta * math.exp(-self.alpha * k)


@dataclass(frozen=True)
class ImatConfig:
    """Reconstruction settings.

    ``beta=None`` means "derive it from the data" (see :func:`default_beta`);
    :meth:`schedule_for` resolves it.
    """

    transform: TransformId = DCT2D
    alpha: float = 0.1
    beta: float | None = None
    max_iterations: int = 300
    min_delta: float = 1e-4

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.min_delta >= 0:
            raise ValueError("min_delta must be >= 0")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    def schedule_for(self, observed: np.ndarray, mask: np.ndarray) -> ThresholdSchedule:
        beta = self.beta if self.beta is not None else _default_beta(observed, mask)
        return ThresholdSchedule(beta=beta, alpha=self.alpha)

    def with_beta(self, beta: float | None) -> "ImatConfig":
        return replace(self, beta=beta)


@dataclass(frozen=True)
class ImatResult:
    restored: Image
    iterations_run: int
    final_delta: float
    residual_on_samples: float
    beta: float = field(default=math.nan)


class EmptyMaskError(ValueError):
    def __init__(self):
        super().__init__("no trusted samples")


def _check_inputs(observed: np.ndarray, mask, transform: TransformId) -> np.ndarray:
    flags = mask.flags if isinstance(mask, SampleMask) else np.asarray(mask, dtype=bool)
    if flags.shape != observed.shape:
        raise ValueError(f"mask shape {flags.shape} does not match image shape {observed.shape}")
    if not flags.any():
        raise EmptyMaskError()
    transform.check_shape(observed.shape)
    return flags


def _default_beta(observed: np.ndarray, flags: np.ndarray) -> float:
    if not flags.any():
        raise EmptyMaskError()
    return BETA_FACTOR * float(np.max(np.abs(observed[flags])))


def default_beta(observed, mask) -> float:
    """Initial threshold: 1.05 times the largest trusted absolute sample value."""
    values = observed.pixels if isinstance(observed, Image) else np.asarray(observed)
    flags = mask.flags if isinstance(mask, SampleMask) else np.asarray(mask, dtype=bool)
    return _default_beta(values.astype(np.float64), flags)


def _iterate(observed: np.ndarray, flags: np.ndarray, cfg: ImatConfig, schedule: ThresholdSchedule):
    """Core loop. Returns ``(coefficients, iterations_run, final_delta)``.

    The stopping delta is measured on coefficients, which equals the spatial
    relative change because every transform here is orthonormal.  It is not
    consulted while the estimate is still identically zero: an early
    threshold above every coefficient would otherwise look like convergence.
    """
    t = cfg.transform
    samples = observed[flags]
    coeffs = np.zeros_like(observed)
    prev_norm = 0.0
    delta = math.inf
    k = 0
    for k in range(1, cfg.max_iterations + 1):
        spatial = inverse(t, coeffs)
        spatial[flags] = samples
        new = hard_threshold(forward(t, spatial), schedule.threshold_at(k - 1))
        change = float(np.linalg.norm(new - coeffs))
        delta = change / (prev_norm + DELTA_EPS)
        coeffs = new
        new_norm = float(np.linalg.norm(coeffs))
        if new_norm > 0 and delta < cfg.min_delta:
            break
        prev_norm = new_norm
    return coeffs, k, delta


def imat_reconstruct_real(observed, mask, cfg: ImatConfig | None = None) -> np.ndarray:
    """Real-valued reconstruction; no rounding, clamping or sample re-insertion."""
    cfg = cfg or ImatConfig()
    obs = np.array(observed, dtype=np.float64)
    flags = _check_inputs(obs, mask, cfg.transform)
    schedule = cfg.schedule_for(obs, flags)
    coeffs, _, _ = _iterate(obs, flags, cfg, schedule)
    return inverse(cfg.transform, coeffs)


def imat_reconstruct(observed: Image, mask: SampleMask, cfg: ImatConfig | None = None) -> ImatResult:
    """Restore an 8-bit image from its trusted pixels.

    The final estimate is rounded, clamped to [0, 255], and the trusted
    pixels are copied back from ``observed``.
    """
    cfg = cfg or ImatConfig()
    obs = observed.pixels.astype(np.float64)
    flags = _check_inputs(obs, mask, cfg.transform)
    schedule = cfg.schedule_for(obs, flags)
    coeffs, iterations, delta = _iterate(obs, flags, cfg, schedule)

    estimate = np.clip(np.rint(inverse(cfg.transform, coeffs)), 0, MAX_VALUE)
    residual = float(np.sqrt(np.mean((estimate[flags] - obs[flags]) ** 2)))
    estimate[flags] = obs[flags]
    return ImatResult(
        restored=Image(estimate.astype(np.uint8)),
        iterations_run=iterations,
        final_delta=delta,
        residual_on_samples=residual,
        beta=schedule.beta,
    )
