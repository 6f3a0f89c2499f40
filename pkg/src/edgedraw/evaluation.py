"""Tolerance-matched comparison of predicted and ground-truth edge maps.

Matching is greedy one-to-one over candidate pairs within a Chebyshev
radius, taken in ascending distance order with row-major tie-breaks
(predicted pixel first, then ground-truth pixel).  This is a
deterministic stand-in for full cost-matrix pixel correspondence and
agrees with it closely at small tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .drawing import EdgeMap

__all__ = [
    "MatchResult",
    "EvalResult",
    "DatasetResult",
    "DEFAULT_TOLERANCE",
    "match_edge_maps",
    "score",
    "aggregate",
]

DEFAULT_TOLERANCE = 2


@dataclass(frozen=True)
class MatchResult:
    tp: int
    fp: int
    fn: int
    tolerance: int


@dataclass(frozen=True)
class EvalResult:
    precision: float
    recall: float
    f1: float
    match: MatchResult


@dataclass(frozen=True)
class DatasetResult:
    """Pooled-count (micro) scores plus the mean of per-image scores (macro)."""

    micro: EvalResult
    macro_precision: float
    macro_recall: float
    macro_f1: float
    per_image: tuple[EvalResult, ...]


@lru_cache(maxsize=None)
def _ring(d: int) -> tuple[tuple[int, int], ...]:
    """(dy, dx) offsets at Chebyshev distance exactly d, in row-major order."""
    if d == 0:
        return ((0, 0),)
    offsets = [
        (dy, dx)
        for dy in range(-d, d + 1)
        for dx in range(-d, d + 1)
        if max(abs(dy), abs(dx)) == d
    ]
    return tuple(offsets)


def match_edge_maps(pred: EdgeMap, gt: EdgeMap, tolerance: int = DEFAULT_TOLERANCE) -> MatchResult:
    """Greedily pair predicted and ground-truth pixels within the tolerance.

    Pairs are considered in ascending Chebyshev distance; at equal
    distance, predicted pixels go in row-major order and each takes its
    row-major-first free ground-truth pixel.  Every pixel matches at most
    once; tp/fp/fn fall out of the final matching.
    """
    if pred.mask.shape != gt.mask.shape:
        raise ValueError(
            f"dimension mismatch: predicted {pred.mask.shape} vs ground truth {gt.mask.shape}"
        )
    if tolerance < 0:
        raise ValueError("tolerance must be >= 0")

    h, w = pred.mask.shape
    gt_mask = gt.mask
    gt_total = int(gt_mask.sum())
    pred_pixels = [(int(y), int(x)) for y, x in np.argwhere(pred.mask)]

    gt_taken = np.zeros((h, w), dtype=bool)
    pred_taken = np.zeros(len(pred_pixels), dtype=bool)
    tp = 0
    for d in range(tolerance + 1):
        ring = _ring(d)
        for i, (py, px) in enumerate(pred_pixels):
            if pred_taken[i]:
                continue
            for dy, dx in ring:
                gy = py + dy
                gx = px + dx
                if 0 <= gy < h and 0 <= gx < w and gt_mask[gy, gx] and not gt_taken[gy, gx]:
                    gt_taken[gy, gx] = True
                    pred_taken[i] = True
                    tp += 1
                    break
    return MatchResult(tp=tp, fp=len(pred_pixels) - tp, fn=gt_total - tp, tolerance=tolerance)


def score(m: MatchResult) -> EvalResult:
    """Precision, recall and F1 from matched counts; empty denominators give 0."""
    tp, fp, fn = m.tp, m.fp, m.fn
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    f1 = 2 * tp / (2 * tp + fp + fn) if 2 * tp + fp + fn > 0 else 0.0
    return EvalResult(precision, recall, f1, m)


def aggregate(results) -> DatasetResult:
    """Pool tp/fp/fn across images (micro) and average per-image scores (macro)."""
    results = tuple(results)
    if not results:
        raise ValueError("nothing to aggregate")
    tp = sum(r.match.tp for r in results)
    fp = sum(r.match.fp for r in results)
    fn = sum(r.match.fn for r in results)
    micro = score(MatchResult(tp, fp, fn, results[0].match.tolerance))
    n = len(results)
    return DatasetResult(
        micro=micro,
        macro_precision=sum(r.precision for r in results) / n,
        macro_recall=sum(r.recall for r in results) / n,
        macro_f1=sum(r.f1 for r in results) / n,
        per_image=results,
    )
