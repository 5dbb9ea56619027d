"""Benchmark harness: noise-ratio sweeps over images and denoising methods.

Each cell (image, ratio, trial) gets one corrupted image shared by every
method, so methods are compared on identical inputs.  The per-trial seed is
derived from ``(base_seed, image name, ratio, trial)`` with BLAKE2b, which
makes scenario 1 and scenario 2 runs see the same noise positions.
"""

from __future__ import annotations

import csv
import hashlib
import io
import logging
import math
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .baselines import DEFAULT_AMF_MAX_WINDOW, adaptive_median_filter, median_filter
from .detect import detect_noise_free
from .image import Image, save_pgm
from .imat import ImatConfig, imat_reconstruct
from .metrics import psnr
from .noise import NoiseSpec, inject_salt_pepper, sparsify
from .transforms import DCT2D, TransformId, parse_transform

log = logging.getLogger(__name__)

CSV_HEADER = ["image", "scenario", "noise_ratio", "method", "trial", "psnr_db", "seed",
              "iterations", "wall_time_ms"]


@dataclass(frozen=True)
class Scenario:
    """``keep_fraction=None`` denoises the original image (scenario 1);
    otherwise the image is sparsified before corruption (scenario 2)."""

    keep_fraction: float | None = None
    transform: TransformId = DCT2D

    @property
    def label(self) -> str:
        if self.keep_fraction is None:
            return "original"
        return f"sparsified{self.keep_fraction:g}"

    def reference(self, img: Image) -> Image:
        if self.keep_fraction is None:
            return img
        return sparsify(img, self.transform, self.keep_fraction)


ORIGINAL = Scenario()


@dataclass(frozen=True)
class Method:
    """A named denoiser. ``kind`` is ``imat``, ``median``, ``amf`` or ``noisy``
    (pass-through, for the PSNR of the corrupted input itself)."""

    name: str
    kind: str
    window: int = 3
    imat: ImatConfig = field(default_factory=ImatConfig)

    def run(self, noisy: Image) -> tuple[Image, int | None]:
        if self.kind == "imat":
            res = imat_reconstruct(noisy, detect_noise_free(noisy), self.imat)
            return res.restored, res.iterations_run
        if self.kind == "median":
            return median_filter(noisy, self.window), None
        if self.kind == "amf":
            return adaptive_median_filter(noisy, self.window), None
        if self.kind == "noisy":
            return noisy, None
        raise ValueError(f"unknown method kind {self.kind!r}")


def parse_method(spec: str, imat_config: ImatConfig | None = None) -> Method:
    """Method names: ``imat``, ``imat-haar``, ``imat-db4``, ``median<k>``, ``amf``,
    ``amf<k>`` and ``noisy``."""
    spec = spec.strip().lower()
    cfg = imat_config or ImatConfig()
    if spec == "noisy":
        return Method(spec, "noisy")
    if spec == "imat":
        return Method(spec, "imat", imat=cfg)
    m = re.fullmatch(r"imat-(haar|db4|dct)", spec)
    if m:
        levels = cfg.transform.levels if cfg.transform.kind != "dct" else 4
        return Method(spec, "imat", imat=replace(cfg, transform=parse_transform(m[1], levels)))
    m = re.fullmatch(r"(median|amf)(\d*)", spec)
    if m and (m[2] or m[1] == "amf"):
        window = int(m[2]) if m[2] else DEFAULT_AMF_MAX_WINDOW
        if window < 3 or window % 2 == 0:
            raise ValueError(f"{spec}: window must be odd and >= 3")
        return Method(spec, m[1], window=window)
    raise ValueError(f"unknown method {spec!r}")


@dataclass
class Row:
    image: str
    scenario: str
    noise_ratio: float
    method: str
    trial: int | str  # 1-based trial number, or "mean" for aggregates
    psnr_db: float
    seed: int
    iterations: int | None = None
    wall_time_ms: int | None = None
    error: str | None = None

    @property
    def is_aggregate(self) -> bool:
        return self.trial == "mean"


@dataclass
class BenchmarkReport:
    rows: list[Row] = field(default_factory=list)

    def aggregates(self) -> list[Row]:
        return [r for r in self.rows if r.is_aggregate]

    def mean_psnr(self, image: str, ratio: float, method: str) -> float:
        for r in self.aggregates():
            if r.image == image and r.method == method and math.isclose(r.noise_ratio, ratio):
                return r.psnr_db
        raise KeyError((image, ratio, method))


def derive_seed(base_seed: int, image: str, ratio: float, trial: int) -> int:
    key = f"{base_seed}|{image}|{ratio!r}|{trial}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")


def _mean_psnr(values: list[float]) -> float:
    """Mean of per-trial PSNRs; any NaN poisons the cell, all-infinite stays infinite."""
    if any(math.isnan(v) for v in values):
        return math.nan
    return float(np.mean(values))


def _run_cell(args) -> list[Row]:
    (name, img, ratio, trial, seed, methods, scenario, salt_fraction, timing, dump_dir) = args
    if img is None:
        return [Row(name, scenario.label, ratio, m.name, trial, math.nan, seed,
                    error="unreadable image") for m in methods]
    rows = []
    try:
        reference = scenario.reference(img)
        noisy = inject_salt_pepper(reference, NoiseSpec(ratio, salt_fraction, seed))
    except Exception as exc:  # flagged, never fatal to the sweep
        log.warning("cell %s ratio=%g trial=%s failed: %s", name, ratio, trial, exc)
        return [Row(name, scenario.label, ratio, m.name, trial, math.nan, seed,
                    error=repr(exc)) for m in methods]
    for method in methods:
        t0 = time.perf_counter()
        try:
            restored, iterations = method.run(noisy)
        except Exception as exc:
            log.warning("%s on %s ratio=%g trial=%s failed: %s", method.name, name, ratio, trial, exc)
            rows.append(Row(name, scenario.label, ratio, method.name, trial, math.nan, seed,
                            error=repr(exc)))
            continue
        elapsed = round((time.perf_counter() - t0) * 1000) if timing else None
        rows.append(Row(name, scenario.label, ratio, method.name, trial,
                        psnr(reference, restored), seed, iterations, elapsed))
        if dump_dir is not None:
            fname = f"{name}_{scenario.label}_{ratio:g}_{method.name}_{trial}.pgm"
            save_pgm(Path(dump_dir) / fname, restored)
    return rows


def run_sweep(
    images: Sequence[tuple[str, Image | None]],
    ratios: Sequence[float],
    methods: Sequence[Method | str],
    scenario: Scenario = ORIGINAL,
    trials_per_cell: int = 3,
    base_seed: int = 0,
    *,
    salt_fraction: float = 0.5,
    record_timing: bool = False,
    dump_dir: str | Path | None = None,
    workers: int = 1,
) -> BenchmarkReport:
    """Run every (image, ratio, method, trial) combination.

    An image given as ``None`` (e.g. failed to load) yields flagged NaN rows.
    Wall-clock times are only recorded when ``record_timing`` is set, since
    they would break byte-for-byte reproducibility of the CSV.
    """
    if not images or not ratios or not methods:
        raise ValueError("images, ratios and methods must be non-empty")
    if trials_per_cell < 1:
        raise ValueError("trials_per_cell must be >= 1")
    for r in ratios:
        if not 0.0 < r < 1.0:
            raise ValueError(f"noise ratios must lie in (0, 1), got {r}")
    methods = [parse_method(m) if isinstance(m, str) else m for m in methods]
    if dump_dir is not None:
        Path(dump_dir).mkdir(parents=True, exist_ok=True)

    jobs = []
    for name, img in images:
        for ratio in ratios:
            for trial in range(1, trials_per_cell + 1):
                seed = derive_seed(base_seed, name, ratio, trial)
                jobs.append((name, img, ratio, trial, seed, methods, scenario,
                             salt_fraction, record_timing, dump_dir))

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_cell, jobs))
    else:
        results = [_run_cell(job) for job in jobs]

    # regroup by (image, ratio, method) in input order, independent of completion order
    cells: dict[tuple, list[Row]] = {}
    for cell_rows in results:
        for row in cell_rows:
            cells.setdefault((row.image, row.noise_ratio, row.method), []).append(row)

    report = BenchmarkReport()
    for name, _ in images:
        for ratio in ratios:
            for method in methods:
                trial_rows = sorted(cells[(name, ratio, method.name)], key=lambda r: r.trial)
                report.rows.extend(trial_rows)
                errors = [r.error for r in trial_rows if r.error]
                report.rows.append(Row(
                    name, scenario.label, ratio, method.name, "mean",
                    _mean_psnr([r.psnr_db for r in trial_rows]), base_seed,
                    error=errors[0] if errors else None,
                ))
    return report


def _fmt_psnr(v: float) -> str:
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf"
    return f"{v:.4f}"


def write_csv(report: BenchmarkReport) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in report.rows:
        writer.writerow([
            r.image, r.scenario, f"{r.noise_ratio:g}", r.method, r.trial,
            _fmt_psnr(r.psnr_db), r.seed,
            "" if r.iterations is None else r.iterations,
            "" if r.wall_time_ms is None else r.wall_time_ms,
        ])
    return buf.getvalue().encode("utf-8")
