"""8-bit raster images and bit-exact file I/O.

PGM (P2 plain and P5 binary, maxval up to 255) is the canonical
interchange format and round-trips pixel-identically.  PNG is accepted
for dataset ingestion (8-bit gray or RGB only) and can be written for
edge-map export.  16-bit and paletted sources are rejected outright
rather than silently converted.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

__all__ = [
    "FormatError",
    "GrayImage",
    "RgbImage",
    "rgb_to_gray",
    "load_raster",
    "save_raster",
]

# BT.601 luma weights; rounding is round-half-up.
_LUMA = (0.299, 0.587, 0.114)


class FormatError(ValueError):
    """Corrupt header, truncated payload, or unsupported pixel depth."""


def _validated_u8(values, ndim: int, what: str) -> np.ndarray:
    arr = np.asarray(values)
    if arr.ndim != ndim:
        raise ValueError(f"{what} expects a {ndim}-d array, got shape {arr.shape}")
    if ndim == 3 and arr.shape[2] != 3:
        raise ValueError(f"{what} expects 3 channels, got {arr.shape[2]}")
    if arr.size == 0:
        raise ValueError(f"{what} must be non-empty")
    if not np.issubdtype(arr.dtype, np.integer):
        raise ValueError(f"{what} pixels must be integers, got dtype {arr.dtype}")
    if arr.min() < 0 or arr.max() > 255:
        raise ValueError(f"{what} pixels must lie in [0, 255]")
    out = arr.astype(np.uint8, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class GrayImage:
    """Single-channel 8-bit image; ``pixels`` is a read-only (height, width) array."""

    pixels: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pixels", _validated_u8(self.pixels, 2, "GrayImage"))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


@dataclass(frozen=True)
class RgbImage:
    """Three-channel 8-bit image; ``pixels`` is a read-only (height, width, 3) array."""

    pixels: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pixels", _validated_u8(self.pixels, 3, "RgbImage"))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


def rgb_to_gray(img: RgbImage) -> GrayImage:
    """Convert to grayscale with BT.601 weights, round-half-up, clamped to [0, 255]."""
    rgb = img.pixels.astype(np.float64)
    luma = _LUMA[0] * rgb[:, :, 0] + _LUMA[1] * rgb[:, :, 1] + _LUMA[2] * rgb[:, :, 2]
    gray = np.clip(np.floor(luma + 0.5), 0, 255).astype(np.uint8)
    return GrayImage(gray)


# ---------------------------------------------------------------------------
# PGM
# ---------------------------------------------------------------------------

_WHITESPACE = b" \t\r\n\x0b\x0c"


def _pgm_header(data: bytes):
    """Return (magic, width, height, maxval, payload_offset)."""
    tokens = []
    pos = 0
    while len(tokens) < 4:
        if pos >= len(data):
            raise FormatError("PGM header ended prematurely")
        ch = data[pos : pos + 1]
        if ch in _WHITESPACE:
            pos += 1
            continue
        if ch == b"#":
            nl = data.find(b"\n", pos)
            if nl < 0:
                raise FormatError("unterminated PGM comment")
            pos = nl + 1
            continue
        end = pos
        while end < len(data) and data[end : end + 1] not in _WHITESPACE and data[end : end + 1] != b"#":
            end += 1
        tokens.append(data[pos:end])
        pos = end
    magic = tokens[0]
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise FormatError("non-numeric PGM header field") from None
    if width <= 0 or height <= 0:
        raise FormatError(f"bad PGM dimensions {width}x{height}")
    if maxval > 255:
        raise FormatError(f"unsupported PGM depth (maxval {maxval}); only 8-bit is accepted")
    if maxval <= 0:
        raise FormatError(f"bad PGM maxval {maxval}")
    # exactly one whitespace byte separates the maxval from a P5 payload
    return magic, width, height, maxval, pos + 1


def _read_pgm(data: bytes) -> GrayImage:
    magic, width, height, maxval, payload_at = _pgm_header(data)
    n = width * height
    if magic == b"P5":
        payload = data[payload_at : payload_at + n]
        if len(payload) < n:
            raise FormatError("truncated P5 payload")
        arr = np.frombuffer(payload, dtype=np.uint8).reshape(height, width)
    elif magic == b"P2":
        fields = data[payload_at - 1 :].split()
        if len(fields) < n:
            raise FormatError("truncated P2 payload")
        if len(fields) > n:
            raise FormatError("trailing data after P2 payload")
        try:
            arr = np.array([int(f) for f in fields], dtype=np.int64).reshape(height, width)
        except ValueError:
            raise FormatError("non-numeric P2 sample") from None
        if arr.min() < 0:
            raise FormatError("negative P2 sample")
    else:
        raise FormatError(f"not a PGM file (magic {magic!r})")
    if int(arr.max()) > maxval:
        raise FormatError(f"sample exceeds declared maxval {maxval}")
    return GrayImage(arr.astype(np.uint8))


def _write_pgm(img: GrayImage, path: Path, plain: bool) -> None:
    header = f"{'P2' if plain else 'P5'}\n{img.width} {img.height}\n255\n"
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        if plain:
            for row in img.pixels:
                fh.write(" ".join(str(v) for v in row.tolist()).encode("ascii"))
                fh.write(b"\n")
        else:
            fh.write(img.pixels.tobytes())


# ---------------------------------------------------------------------------
# PNG
# ---------------------------------------------------------------------------

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def _read_png(path: Path) -> GrayImage | RgbImage:
    try:
        with Image.open(path) as im:
            mode = im.mode
            if mode == "L":
                return GrayImage(np.asarray(im))
            if mode == "RGB":
                return RgbImage(np.asarray(im))
    except UnidentifiedImageError:
        raise FormatError(f"{path}: unreadable PNG") from None
    raise FormatError(f"{path}: unsupported PNG mode {mode!r}; only 8-bit gray and RGB are accepted")


# ---------------------------------------------------------------------------
# public I/O
# ---------------------------------------------------------------------------


def load_raster(path) -> GrayImage | RgbImage:
    """Decode a PGM (P2/P5) or PNG file, dispatching on the file magic.

    Raises OSError for unreadable paths and FormatError for corrupt or
    unsupported content.
    """
    path = Path(path)
    data = path.read_bytes()
    if data[:2] in (b"P2", b"P5"):
        return _read_pgm(data)
    if data[: len(_PNG_MAGIC)] == _PNG_MAGIC:
        return _read_png(path)
    raise FormatError(f"{path}: neither PGM nor PNG")


def save_raster(img: GrayImage, path, *, plain: bool = False) -> None:
    """Write a GrayImage; the suffix picks the format (.pgm/.pnm or .png).

    PGM is written as binary P5 unless ``plain`` asks for ASCII P2.  Both
    variants re-load pixel-identically.
    """
    if not isinstance(img, GrayImage):
        raise ValueError("save_raster writes GrayImage only")
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix in (".pgm", ".pnm"):
        _write_pgm(img, path, plain)
    elif suffix == ".png":
        Image.fromarray(img.pixels, mode="L").save(path)
    else:
        raise ValueError(f"unsupported output suffix {suffix!r} (use .pgm or .png)")
