"""Salt-and-pepper noise removal via sparse reconstruction (IMAT)."""

__version__ = "0.1.0"

from .baselines import adaptive_median_filter, median_filter
from .detect import detect_noise_free
from .image import Image, PGMError, SampleMask, load_pgm, read_pgm, save_pgm, write_pgm
from .imat import (
    ImatConfig,
    ImatResult,
    ThresholdSchedule,
    default_beta,
    imat_reconstruct,
    imat_reconstruct_real,
)
from .metrics import mse, psnr
from .noise import NoiseSpec, erase_samples, inject_salt_pepper, sparsify
from .rng import Rng, rng_new
from .transforms import DCT2D, TransformId, dwt_db4, dwt_haar, forward, hard_threshold, inverse
