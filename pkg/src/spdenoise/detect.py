"""Noise-free pixel detection for salt-and-pepper corrupted images."""

from __future__ import annotations

from .image import MAX_VALUE, Image, SampleMask


def detect_noise_free(img: Image) -> SampleMask:
    """Trust exactly the pixels strictly between 0 and 255.

    Clean pixels that happen to sit at an extreme are given up as untrusted;
    the reconstruction fills them in like any other missing sample.
    """
    p = img.pixels
    return SampleMask((p > 0) & (p < MAX_VALUE))
