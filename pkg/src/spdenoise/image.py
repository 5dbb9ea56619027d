"""Grayscale image and sample-mask value types, plus binary PGM (P5) I/O."""

from __future__ import annotations

from dataclasses import dataclass
from os import PathLike
from pathlib import Path

import numpy as np

MAX_VALUE = 255


class PGMError(ValueError):
    """Base class for PGM decoding failures."""


class BadMagicError(PGMError):
    pass


class BadHeaderError(PGMError):
    pass


class BadDimensionsError(PGMError):
    pass


class MaxvalError(PGMError):
    pass


class TruncatedPayloadError(PGMError):
    pass


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Image:
    """8-bit grayscale image stored as a read-only ``(height, width)`` uint8 array."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ValueError(f"image must be a non-empty 2-D grid, got shape {arr.shape}")
        if arr.dtype != np.uint8:
            if arr.dtype.kind not in "iu":
                raise TypeError(f"pixel values must be integers, got {arr.dtype}")
            if arr.min() < 0 or arr.max() > MAX_VALUE:
                raise ValueError("pixel values must lie in [0, 255]")
            arr = arr.astype(np.uint8)
        object.__setattr__(self, "pixels", _frozen(arr))

    @classmethod
    def from_values(cls, width: int, height: int, values) -> "Image":
        """Build from a row-major flat sequence of ``width * height`` values."""
        flat = np.asarray(values)
        if flat.size != width * height:
            raise ValueError(f"expected {width * height} values, got {flat.size}")
        return cls(flat.reshape(height, width))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    @property
    def size(self) -> int:
        return self.pixels.size

    def flat(self) -> list[int]:
        return self.pixels.ravel().tolist()

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.pixels, other.pixels))

    def __repr__(self):
        return f"Image({self.width}x{self.height})"


@dataclass(frozen=True, eq=False)
class SampleMask:
    """Boolean grid of trusted pixel positions (``True`` = trusted)."""

    flags: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.flags)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ValueError(f"mask must be a non-empty 2-D grid, got shape {arr.shape}")
        object.__setattr__(self, "flags", _frozen(arr.astype(bool)))

    @classmethod
    def full(cls, height: int, width: int, value: bool = True) -> "SampleMask":
        return cls(np.full((height, width), value, dtype=bool))

    @property
    def width(self) -> int:
        return self.flags.shape[1]

    @property
    def height(self) -> int:
        return self.flags.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.flags.shape

    @property
    def trusted_count(self) -> int:
        return int(np.count_nonzero(self.flags))

    def to_image(self) -> Image:
        """Mask-file representation: 255 where trusted, 0 elsewhere."""
        return Image(np.where(self.flags, MAX_VALUE, 0).astype(np.uint8))

    @classmethod
    def from_image(cls, img: Image) -> "SampleMask":
        bad = (img.pixels != 0) & (img.pixels != MAX_VALUE)
        if bad.any():
            raise ValueError("mask image may only contain the values 0 and 255")
        return cls(img.pixels == MAX_VALUE)

    def __eq__(self, other):
        if not isinstance(other, SampleMask):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.flags, other.flags))

    def __repr__(self):
        return f"SampleMask({self.width}x{self.height}, trusted={self.trusted_count})"


_WHITESPACE = b" \t\n\r\v\f"


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    """Read one header token, skipping whitespace and '#' comments."""
    n = len(data)
    while pos < n:
        c = data[pos:pos + 1]
        if c == b"#":
            eol = data.find(b"\n", pos)
            pos = n if eol < 0 else eol + 1
        elif c in _WHITESPACE:
            pos += 1
        else:
            break
    start = pos
    while pos < n and data[pos:pos + 1] not in _WHITESPACE and data[pos:pos + 1] != b"#":
        pos += 1
    if start == pos:
        raise BadHeaderError("unexpected end of header")
    return data[start:pos], pos


def _header_int(data: bytes, pos: int, what: str) -> tuple[int, int]:
    tok, pos = _next_token(data, pos)
    if not tok.isdigit():
        raise BadHeaderError(f"{what} is not a decimal integer: {tok!r}")
    return int(tok), pos


def read_pgm(data: bytes) -> Image:
    """Decode a binary (P5) PGM with ``maxval <= 255``.

    Pixel values are kept as stored; files with ``maxval < 255`` are not
    rescaled. Bytes after the payload are ignored.
    """
    if data[:2] != b"P5":
        raise BadMagicError(f"expected magic 'P5', got {data[:2]!r}")
    pos = 2
    if pos < len(data) and data[pos:pos + 1] not in _WHITESPACE and data[pos:pos + 1] != b"#":
        raise BadMagicError("magic number must be followed by whitespace")
    width, pos = _header_int(data, pos, "width")
    height, pos = _header_int(data, pos, "height")
    if width == 0 or height == 0:
        raise BadDimensionsError(f"zero image dimension: {width}x{height}")
    maxval, pos = _header_int(data, pos, "maxval")
    if not 0 < maxval <= MAX_VALUE:
        raise MaxvalError(f"maxval must be in 1..255, got {maxval}")
    if pos >= len(data) or data[pos:pos + 1] not in _WHITESPACE:
        raise TruncatedPayloadError("missing whitespace before pixel payload")
    pos += 1
    need = width * height
    payload = data[pos:pos + need]
    if len(payload) < need:
        raise TruncatedPayloadError(f"payload has {len(payload)} bytes, expected {need}")
    pixels = np.frombuffer(payload, dtype=np.uint8).reshape(height, width)
    if maxval < MAX_VALUE and pixels.max() > maxval:
        raise MaxvalError(f"pixel value exceeds declared maxval {maxval}")
    return Image(pixels)


def write_pgm(img: Image) -> bytes:
    """Canonical encoding: ``b"P5\\n<w> <h>\\n255\\n"`` followed by the raw bytes."""
    header = f"P5\n{img.width} {img.height}\n{MAX_VALUE}\n".encode("ascii")
    return header + img.pixels.tobytes()


def load_pgm(path: str | PathLike) -> Image:
    return read_pgm(Path(path).read_bytes())


def save_pgm(path: str | PathLike, img: Image) -> None:
    Path(path).write_bytes(write_pgm(img))


def load_mask(path: str | PathLike) -> SampleMask:
    return SampleMask.from_image(load_pgm(path))


def save_mask(path: str | PathLike, mask: SampleMask) -> None:
    save_pgm(path, mask.to_image())


def load_image(path: str | PathLike) -> Image:
    """Load a PGM, or any format Pillow understands (converted to grayscale)."""
    path = Path(path)
    data = path.read_bytes()
    if data[:2] == b"P5":
        return read_pgm(data)
    try:
        from PIL import Image as PILImage
    except ImportError:  # pragma: no cover
        raise BadMagicError(f"{path}: not a P5 PGM and Pillow is unavailable") from None
    with PILImage.open(path) as im:
        return Image(np.asarray(im.convert("L")))
