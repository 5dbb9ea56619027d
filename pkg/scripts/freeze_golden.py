"""Regenerate tests/data/golden.json from a reference run.

Run only when a deliberate algorithm change invalidates the frozen values:

    python scripts/freeze_golden.py
"""

import hashlib
import json
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from spdenoise import DCT2D, NoiseSpec, inject_salt_pepper, load_pgm, psnr, sparsify, write_pgm  # noqa: E402
from spdenoise.noise import choose_positions  # noqa: E402
from lena_sweep import lena_sweep  # noqa: E402


def main():
    lena = load_pgm(ROOT / "tests" / "data" / "lena512.pgm")
    golden = {}
    positions = choose_positions(512 * 512, 0.3, 7)
    golden["positions_512_r0.3_seed7_sha256"] = hashlib.sha256(
        np.sort(positions).astype("<i8").tobytes()).hexdigest()
    golden["corrupt_lena_r0.3_seed7_sha256"] = hashlib.sha256(
        write_pgm(inject_salt_pepper(lena, NoiseSpec(0.3, seed=7)))).hexdigest()
    golden["sparsify_lena_dct_0.2_psnr"] = psnr(lena, sparsify(lena, DCT2D, 0.2))

    from spdenoise.detect import detect_noise_free
    from spdenoise.imat import imat_reconstruct
    noisy = inject_salt_pepper(lena, NoiseSpec(0.3, seed=7))
    golden["denoise_lena_r0.3_seed7_psnr"] = psnr(
        lena, imat_reconstruct(noisy, detect_noise_free(noisy)).restored)

    golden["sweep"] = lena_sweep(lena)
    out = ROOT / "tests" / "data" / "golden.json"
    out.write_text(json.dumps(golden, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
