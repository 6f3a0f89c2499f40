"""Dataset pairing: detector inputs and ground-truth maps matched by stem.

A dataset root holds ``images/`` and ``gt/`` sibling directories; files
pair up by stem (``images/0001.pgm`` with ``gt/0001.pgm`` or ``.png``).
Ground truth is any raster whose nonzero pixels mark boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .drawing import EdgeMap
from .raster import GrayImage, RgbImage, load_raster, rgb_to_gray

__all__ = ["DatasetError", "ImagePair", "find_pairs", "dataset_pairs", "load_gray", "load_edge_map"]

RASTER_SUFFIXES = (".pgm", ".pnm", ".png")


class DatasetError(ValueError):
    """Empty dataset or image/ground-truth files that do not pair up."""


@dataclass(frozen=True)
class ImagePair:
    stem: str
    image_path: Path
    gt_path: Path


def _stems(directory: Path) -> dict[str, Path]:
    if not directory.is_dir():
        raise DatasetError(f"not a directory: {directory}")
    found: dict[str, Path] = {}
    for path in sorted(directory.iterdir()):
        if path.suffix.lower() in RASTER_SUFFIXES:
            if path.stem in found:
                raise DatasetError(f"duplicate stem {path.stem!r} in {directory}")
            found[path.stem] = path
    return found


def find_pairs(images_dir, gt_dir) -> list[ImagePair]:
    images = _stems(Path(images_dir))
    gts = _stems(Path(gt_dir))
    if not images:
        raise DatasetError(f"no raster files under {images_dir}")
    unpaired = sorted(set(images) ^ set(gts))
    if unpaired:
        raise DatasetError(f"unpaired stems: {', '.join(unpaired)}")
    return [ImagePair(stem, images[stem], gts[stem]) for stem in sorted(images)]


def dataset_pairs(root) -> list[ImagePair]:
    root = Path(root)
    return find_pairs(root / "images", root / "gt")


def load_gray(path) -> GrayImage:
    img = load_raster(path)
    if isinstance(img, RgbImage):
        return rgb_to_gray(img)
    return img


def load_edge_map(path) -> EdgeMap:
    return EdgeMap.from_gray(load_gray(path))
