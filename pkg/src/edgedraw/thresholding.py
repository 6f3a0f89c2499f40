"""Otsu's histogram threshold and the automatic edge-drawing thresholds.

The split point maximizes the between-class variance
w0(t) * w1(t) * (mu0(t) - mu1(t))^2 with class 0 holding intensities
below t.  The scan is done in exact integer arithmetic (the variance is
a ratio of integer products), so the returned threshold is the exact
smallest maximizer with no floating-point tie ambiguity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .raster import GrayImage

__all__ = [
    "DegenerateHistogramError",
    "Histogram256",
    "OtsuResult",
    "AutoThresholds",
    "histogram",
    "magnitude_histogram",
    "otsu_threshold",
    "derive_ed_thresholds",
]

GRAD_RATIO = 0.5
ANCHOR_RATIO = 0.067


class DegenerateHistogramError(ValueError):
    """Histogram has fewer than two populated bins; no split exists."""


@dataclass(frozen=True)
class Histogram256:
    """256-bin intensity histogram; ``total`` is the source pixel count."""

    bins: np.ndarray  # (256,) int64, read-only
    total: int

    def __post_init__(self):
        arr = np.asarray(self.bins, dtype=np.int64)
        if arr.shape != (256,):
            raise ValueError(f"need exactly 256 bins, got shape {arr.shape}")
        if arr.min() < 0:
            raise ValueError("bin counts must be non-negative")
        if int(arr.sum()) != self.total or self.total <= 0:
            raise ValueError("total must equal the sum of the bins and be positive")
        arr.flags.writeable = False
        object.__setattr__(self, "bins", arr)


def histogram(img: GrayImage) -> Histogram256:
    counts = np.bincount(img.pixels.ravel(), minlength=256).astype(np.int64)
    return Histogram256(counts, int(counts.sum()))


def magnitude_histogram(magnitude: np.ndarray) -> Histogram256:
    """Histogram of a gradient-magnitude field, rounded and clipped to [0, 255]."""
    levels = np.clip(np.rint(np.asarray(magnitude, dtype=np.float64)), 0, 255).astype(np.intp)
    counts = np.bincount(levels.ravel(), minlength=256).astype(np.int64)
    return Histogram256(counts, int(counts.sum()))


@dataclass(frozen=True)
class OtsuResult:
    threshold: int
    between_class_variance: float
    class_weights: tuple[float, float]
    class_means: tuple[float, float]


def otsu_threshold(h: Histogram256) -> OtsuResult:
    """Return the smallest t in [1, 255] maximizing the between-class variance.

    Class 0 collects intensities i < t, class 1 the rest; any t leaving a
    class empty is excluded.  Raises DegenerateHistogramError when fewer
    than two bins are populated.
    """
    bins = [int(b) for b in h.bins]
    if sum(1 for b in bins if b > 0) < 2:
        raise DegenerateHistogramError("need at least two populated intensity levels")
    total = h.total
    total_moment = sum(i * b for i, b in enumerate(bins))

    best = None  # (t, num, den, c0, s0): variance = num / (total^2 * den)
    c0 = 0
    s0 = 0
    for t in range(1, 256):
        c0 += bins[t - 1]
        s0 += (t - 1) * bins[t - 1]
        c1 = total - c0
        if c0 == 0 or c1 == 0:
            continue
        s1 = total_moment - s0
        num = (s0 * c1 - s1 * c0) ** 2
        den = c0 * c1
        if best is None or num * best[2] > best[1] * den:
            best = (t, num, den, c0, s0)

    t, num, den, c0, s0 = best
    c1 = total - c0
    s1 = total_moment - s0
    return OtsuResult(
        threshold=t,
        between_class_variance=num / (total * total * den),
        class_weights=(c0 / total, c1 / total),
        class_means=(s0 / c0, s1 / c1),
    )


@dataclass(frozen=True)
class AutoThresholds:
    """Gradient and anchor thresholds derived from one Otsu split."""

    t_otsu: int
    grad_thr: float
    anchor_thr: float


def derive_ed_thresholds(
    t_otsu: int,
    grad_ratio: float = GRAD_RATIO,
    anchor_ratio: float = ANCHOR_RATIO,
) -> AutoThresholds:
    """Scale the Otsu threshold into the two detector thresholds.

    Defaults are grad_thr = 0.5 * t_otsu and anchor_thr = 0.067 * t_otsu;
    both stay real-valued and are compared against real magnitudes
    downstream.  The ratios are configurable for experimentation.
    """
    if not 0 <= t_otsu <= 255:
        raise ValueError(f"t_otsu out of range: {t_otsu}")
    return AutoThresholds(int(t_otsu), grad_ratio * t_otsu, anchor_ratio * t_otsu)
