from pathlib import Path

import numpy as np
import pytest

from edgedraw import GrayImage, save_raster

MINI_ROOT = Path(__file__).parent / "data" / "mini"


@pytest.fixture(scope="session")
def mini_root() -> Path:
    """The committed six-image mini dataset (images/ + gt/)."""
    assert (MINI_ROOT / "images").is_dir(), "mini dataset fixtures missing"
    return MINI_ROOT


def tiny_scene() -> tuple[np.ndarray, np.ndarray]:
    """Deterministic 32x32 scene with a bright square; returns (image, gt mask)."""
    rng = np.random.default_rng(99)
    img = np.full((32, 32), 70.0)
    img[8:24, 10:26] = 150.0
    img += rng.normal(0.0, 3.0, img.shape)
    img = np.clip(np.rint(img), 0, 255).astype(np.uint8)
    label = np.zeros((32, 32), dtype=np.int32)
    label[8:24, 10:26] = 1
    gt = np.zeros((32, 32), dtype=bool)
    gt[:, :-1] |= label[:, :-1] != label[:, 1:]
    gt[:-1, :] |= label[:-1, :] != label[1:, :]
    return img, gt


@pytest.fixture(scope="session")
def tiny_root(tmp_path_factory) -> Path:
    """Single tiny image/gt pair; keeps full-grid sweeps affordable."""
    root = tmp_path_factory.mktemp("tinyset")
    (root / "images").mkdir()
    (root / "gt").mkdir()
    img, gt = tiny_scene()
    save_raster(GrayImage(img), root / "images" / "tiny.pgm")
    save_raster(GrayImage(np.where(gt, 255, 0).astype(np.uint8)), root / "gt" / "tiny.pgm")
    return root


def random_gray(rng, height: int, width: int) -> GrayImage:
    return GrayImage(rng.integers(0, 256, (height, width), dtype=np.int64))
