"""Command-line interface.

Every subcommand reads and writes canonical binary PGM.  Results meant for
scripts are printed to stdout as ``key=value`` lines; diagnostics go to
stderr.  Output files are written atomically, so a zero exit status means
every requested file exists in full.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .baselines import DEFAULT_AMF_MAX_WINDOW, adaptive_median_filter, median_filter
from .bench import Scenario, parse_method, run_sweep, write_csv
from .detect import detect_noise_free
from .image import Image, PGMError, SampleMask, load_image, load_mask, write_pgm
from .imat import EmptyMaskError, ImatConfig, imat_reconstruct
from .metrics import psnr
from .noise import NoiseSpec, erase_samples, inject_salt_pepper, sparsify
from .transforms import parse_transform

log = logging.getLogger("spdenoise")


class CliError(Exception):
    pass


def _write_atomic(path: str | Path, data: bytes) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _save(path, img: Image) -> None:
    _write_atomic(path, write_pgm(img))


def _emit(**values) -> None:
    for key, value in values.items():
        print(f"{key}={value}")


def _fmt_db(value: float) -> str:
    return "inf" if value == float("inf") else f"{value:.4f}"


def _ratio(text: str) -> float:
    value = float(text)
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must be in [0, 1], got {text}")
    return value


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def cmd_corrupt(args) -> int:
    img = load_image(args.inp)
    noisy = inject_salt_pepper(img, NoiseSpec(args.ratio, args.salt_fraction, args.seed))
    _save(args.out, noisy)
    return 0


def cmd_detect(args) -> int:
    mask = detect_noise_free(load_image(args.inp))
    _save(args.out, mask.to_image())
    _emit(trusted_count=mask.trusted_count, total=mask.flags.size)
    return 0


def _imat_config(args) -> ImatConfig:
    beta = None if args.beta == "auto" else float(args.beta)
    return ImatConfig(
        transform=parse_transform(args.transform, args.levels),
        alpha=args.alpha,
        beta=beta,
        max_iterations=args.max_iters,
        min_delta=args.min_delta,
    )


def cmd_denoise(args) -> int:
    cfg = _imat_config(args)
    if args.print_config:
        _emit(transform=args.transform, levels=args.levels, alpha=cfg.alpha,
              beta=args.beta, max_iters=cfg.max_iterations, min_delta=cfg.min_delta,
              mask=args.mask or "detect")
        if args.inp is None:
            return 0
    if args.inp is None or args.out is None:
        raise CliError("denoise requires --in and --out")
    img = load_image(args.inp)
    if args.mask:
        mask = load_mask(args.mask)
    else:
        mask = detect_noise_free(img)
    try:
        result = imat_reconstruct(img, mask, cfg)
    except EmptyMaskError:
        raise CliError("no trusted samples") from None
    _save(args.out, result.restored)
    _emit(iterations_run=result.iterations_run, final_delta=f"{result.final_delta:.6g}",
          beta=f"{result.beta:.6g}", residual_on_samples=f"{result.residual_on_samples:.6g}")
    if args.ref:
        _emit(psnr=_fmt_db(psnr(load_image(args.ref), result.restored)))
    return 0


def cmd_sparsify(args) -> int:
    img = load_image(args.inp)
    out = sparsify(img, parse_transform(args.transform, args.levels), args.keep_fraction)
    _save(args.out, out)
    _emit(psnr=_fmt_db(psnr(img, out)))
    return 0


def cmd_erase(args) -> int:
    img = load_image(args.inp)
    erased, mask = erase_samples(img, args.ratio, args.seed)
    _save(args.out, erased)
    _save(args.mask_out, mask.to_image())
    _emit(trusted_count=mask.trusted_count, total=mask.flags.size)
    return 0


def cmd_psnr(args) -> int:
    _emit(psnr=_fmt_db(psnr(load_image(args.ref), load_image(args.test))))
    return 0


def cmd_median(args) -> int:
    _save(args.out, median_filter(load_image(args.inp), args.window))
    return 0


def cmd_amf(args) -> int:
    _save(args.out, adaptive_median_filter(load_image(args.inp), args.max_window))
    return 0


def _collect_images(specs: list[str]) -> list[tuple[str, Image | None]]:
    paths: list[Path] = []
    for spec in specs:
        p = Path(spec)
        if p.is_dir():
            paths.extend(sorted(q for q in p.iterdir()
                                if q.suffix.lower() in (".pgm", ".png", ".tif", ".tiff", ".bmp")))
        else:
            paths.append(p)
    if not paths:
        raise CliError("no input images found")
    images = []
    for p in paths:
        try:
            images.append((p.stem, load_image(p)))
        except (OSError, PGMError) as exc:
            log.warning("cannot read %s: %s", p, exc)
            images.append((p.stem, None))
    return images


def cmd_bench(args) -> int:
    if args.scenario == 2:
        scenario = Scenario(args.keep_fraction, parse_transform(args.transform, args.levels))
    else:
        scenario = Scenario()
    cfg = ImatConfig(transform=parse_transform(args.transform, args.levels))
    methods = [parse_method(m, cfg) for m in args.methods.split(",") if m.strip()]
    report = run_sweep(
        _collect_images(args.images), args.ratios, methods, scenario,
        trials_per_cell=args.trials, base_seed=args.seed,
        record_timing=args.timing, dump_dir=args.dump_images, workers=args.jobs,
    )
    _write_atomic(args.out, write_csv(report))
    flagged = sum(1 for r in report.rows if r.error)
    _emit(rows=len(report.rows), flagged=flagged)
    return 0


def _add_transform_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--transform", choices=["dct", "haar", "db4"], default="dct")
    p.add_argument("--levels", type=int, default=4, help="wavelet decomposition levels")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spdenoise",
        description="Salt-and-pepper denoising by sparse reconstruction (IMAT).",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("corrupt", help="inject salt-and-pepper noise")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--ratio", type=_ratio, required=True)
    p.add_argument("--salt-fraction", type=_ratio, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_corrupt)

    p = sub.add_parser("detect", help="write the trusted-pixel mask (255 = trusted)")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("denoise", help="reconstruct with IMAT")
    p.add_argument("--in", dest="inp")
    p.add_argument("--out")
    _add_transform_args(p)
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--beta", default="auto", help="initial threshold, or 'auto'")
    p.add_argument("--max-iters", type=int, default=300)
    p.add_argument("--min-delta", type=float, default=1e-4)
    p.add_argument("--mask", help="ground-truth mask PGM (erasure mode)")
    p.add_argument("--ref", help="reference PGM; prints psnr=")
    p.add_argument("--print-config", action="store_true")
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("sparsify", help="keep only the largest transform coefficients")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--keep-fraction", type=float, default=0.2)
    _add_transform_args(p)
    p.set_defaults(func=cmd_sparsify)

    p = sub.add_parser("erase", help="erasure channel: drop pixels, emit image and mask")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mask-out", required=True)
    p.add_argument("--ratio", type=_ratio, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_erase)

    p = sub.add_parser("psnr", help="PSNR of --test against --ref")
    p.add_argument("--ref", required=True)
    p.add_argument("--test", required=True)
    p.set_defaults(func=cmd_psnr)

    p = sub.add_parser("median", help="median filter baseline")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--window", type=int, default=3)
    p.set_defaults(func=cmd_median)

    p = sub.add_parser("amf", help="adaptive median filter baseline")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--max-window", type=int, default=DEFAULT_AMF_MAX_WINDOW)
    p.set_defaults(func=cmd_amf)

    p = sub.add_parser("bench", help="PSNR sweep over noise ratios and methods")
    p.add_argument("--images", nargs="+", required=True, help="PGM files or directories")
    p.add_argument("--ratios", type=_float_list, default=_float_list("0.1,0.2,0.3,0.4,0.5,0.6,0.7"))
    p.add_argument("--methods", default="imat,median3,amf")
    p.add_argument("--scenario", type=int, choices=[1, 2], default=1)
    p.add_argument("--keep-fraction", type=float, default=0.2)
    _add_transform_args(p)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--dump-images", help="directory for restored images")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="record wall_time_ms (non-reproducible)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
