import json
from pathlib import Path

import numpy as np
import pytest

from spdenoise.image import Image, load_pgm
from spdenoise.rng import Rng

DATA = Path(__file__).parent / "data"
LENA_PATH = DATA / "lena512.pgm"

_acceptance_lines: list[str] = []


def record_criterion(name: str, passed: bool, detail: str = "") -> None:
    status = "PASS" if passed else "FAIL"
    _acceptance_lines.append(f"[{status}] {name}" + (f": {detail}" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def lena() -> Image:
    return load_pgm(LENA_PATH)


@pytest.fixture(scope="session")
def golden() -> dict:
    return json.loads((DATA / "golden.json").read_text())


def random_image(seed: int, height: int, width: int, lo: int = 0, hi: int = 255) -> Image:
    """Uniform random image drawn from the package RNG (platform-independent)."""
    rng = Rng(seed)
    span = hi - lo + 1
    vals = [lo + rng.uniform_below(span) for _ in range(height * width)]
    return Image(np.array(vals, dtype=np.uint8).reshape(height, width))


def smooth_image(height: int, width: int) -> Image:
    """Mid-range smooth test pattern with no flat regions."""
    y, x = np.mgrid[0:height, 0:width]
    vals = 128 + 60 * np.sin(x / 5.0 + 0.3) * np.cos(y / 7.0) + 0.37 * x + 0.21 * y
    return Image(np.clip(np.rint(vals), 1, 254).astype(np.uint8))
