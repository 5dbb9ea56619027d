"""Order-statistics reference filters: median and adaptive median (AMF).

Both use replicate-edge padding.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import ndimage

from .image import Image

DEFAULT_AMF_MAX_WINDOW = 39


def _check_window(window: int, name: str = "window") -> None:
    if window < 3 or window % 2 == 0:
        raise ValueError(f"{name} must be an odd integer >= 3, got {window}")


def median_filter(img: Image, window: int = 3) -> Image:
    _check_window(window)
    return Image(ndimage.median_filter(img.pixels, size=window, mode="nearest"))


def adaptive_median_filter(img: Image, max_window: int = DEFAULT_AMF_MAX_WINDOW) -> Image:
    """Classical two-stage adaptive median filter.

    For each pixel the window grows from 3x3 in steps of 2 until the window
    median lies strictly between the window min and max.  The pixel is then
    kept if it is itself strictly between min and max, and replaced by the
    median otherwise.  Pixels never resolved by ``max_window`` get the median
    of the largest window.

    Vectorised over the still-unresolved pixels at each window size.
    """
    _check_window(max_window, "max_window")
    src = img.pixels
    h, w = src.shape
    pad = max_window // 2
    padded = np.pad(src, pad, mode="edge")
    out = src.copy()

    rows, cols = np.divmod(np.arange(h * w), w)
    for win in range(3, max_window + 1, 2):
        r = win // 2
        views = sliding_window_view(padded, (win, win))
        # window centred on (i, j) starts at padded (i + pad - r, j + pad - r)
        patches = views[rows + pad - r, cols + pad - r].reshape(len(rows), -1)
        lo = patches.min(axis=1)
        hi = patches.max(axis=1)
        med = np.partition(patches, win * win // 2, axis=1)[:, win * win // 2]

        z = src[rows, cols]
        resolved = (lo < med) & (med < hi)
        if win == max_window:
            resolved[:] = True
        keep = resolved & (lo < z) & (z < hi) & (lo < med) & (med < hi)
        out[rows[resolved], cols[resolved]] = np.where(keep[resolved], z[resolved], med[resolved])

        rows, cols = rows[~resolved], cols[~resolved]
        if rows.size == 0:
            break
    return Image(out)
