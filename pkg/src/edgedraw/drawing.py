"""The edge-drawing pipeline: weak-pixel suppression, anchors, smart routing.

Detection runs smooth -> gradient -> threshold -> suppress -> anchors ->
route.  Thresholds come either from explicit Manual values or, in Auto
mode, from the Otsu split of the smoothed image (gradient threshold
0.5 * t_otsu, anchor threshold 0.067 * t_otsu, scan interval pinned
to 1).

Anchor and routing rules here are reconstructions of the classic
edge-drawing behaviour, which the usual descriptions leave underspecified:

* a pixel is an anchor when its magnitude beats both directional
  neighbours (left/right for vertical edges, up/down for horizontal) by
  at least the anchor threshold; ties count as anchors so plateau peaks
  are not dropped;
* routing walks both ways from an anchor, stepping to the
  highest-magnitude cell of the three neighbours ahead; when the edge
  orientation flips mid-walk the walk turns onto the perpendicular axis,
  picking whichever side looks stronger ahead (ties prefer up/left);
* a walk ends at a suppressed (zero-magnitude) cell, an already-claimed
  cell, or the image border.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .gradient import GradientField, gaussian_kernel, gradient_field, smooth
from .raster import GrayImage
from .thresholding import (
    DegenerateHistogramError,
    derive_ed_thresholds,
    histogram,
    magnitude_histogram,
    otsu_threshold,
)

__all__ = [
    "Manual",
    "Auto",
    "DetectionParams",
    "AnchorList",
    "EdgeSegment",
    "EdgeMap",
    "ResolvedThresholds",
    "DetectionResult",
    "suppress_weak",
    "extract_anchors",
    "route_from_anchor",
    "detect_edges",
    "segments_to_text",
]


@dataclass(frozen=True)
class Manual:
    """Explicit thresholds: positive gradient threshold, non-negative anchor
    threshold, scan interval in [1, 16]."""

    grad_thr: float
    anchor_thr: float
    scan_interval: int = 1

    def __post_init__(self):
        if not self.grad_thr > 0:
            raise ValueError("grad_thr must be positive")
        if self.anchor_thr < 0:
            raise ValueError("anchor_thr must be non-negative")
        if not 1 <= self.scan_interval <= 16:
            raise ValueError("scan_interval must lie in [1, 16]")


@dataclass(frozen=True)
class Auto:
    """Image-dependent thresholds from the Otsu split; scan interval is 1.

    ``on_gradient`` switches the Otsu source from the smoothed image
    (the default pipeline order) to the gradient-magnitude field.
    """

    grad_ratio: float = 0.5
    anchor_ratio: float = 0.067
    on_gradient: bool = False


@dataclass(frozen=True)
class DetectionParams:
    operator: str = "sobel"
    gaussian_size: int = 9
    mode: Manual | Auto = dataclass_field(default_factory=Auto)
    magnitude_mode: str = "approx"
    min_segment_length: int = 1

    def __post_init__(self):
        if self.min_segment_length < 1:
            raise ValueError("min_segment_length must be >= 1")


@dataclass(frozen=True)
class AnchorList:
    """Scan-grid pixels that pass the directional peak test, as (x, y) pairs."""

    anchors: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.anchors)


@dataclass(frozen=True)
class EdgeSegment:
    """Ordered chain of 8-connected (x, y) pixels."""

    pixels: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.pixels)


@dataclass(frozen=True)
class EdgeMap:
    """Binary edge raster; ``mask`` is a read-only (height, width) bool array."""

    mask: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.mask)
        if arr.dtype != np.bool_ or arr.ndim != 2:
            raise ValueError("mask must be a 2-d bool array")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "mask", arr)

    @property
    def width(self) -> int:
        return self.mask.shape[1]

    @property
    def height(self) -> int:
        return self.mask.shape[0]

    @property
    def edge_count(self) -> int:
        return int(self.mask.sum())

    @classmethod
    def from_segments(cls, shape: tuple[int, int], segments) -> "EdgeMap":
        mask = np.zeros(shape, dtype=bool)
        for seg in segments:
            for x, y in seg.pixels:
                mask[y, x] = True
        return cls(mask)

    @classmethod
    def from_gray(cls, img: GrayImage) -> "EdgeMap":
        return cls(img.pixels > 0)

    def to_gray(self) -> GrayImage:
        return GrayImage(np.where(self.mask, 255, 0).astype(np.uint8))


@dataclass(frozen=True)
class ResolvedThresholds:
    """The thresholds a detection run actually used."""

    mode: str  # "manual" or "auto"
    grad_thr: float | None
    anchor_thr: float | None
    scan_interval: int
    t_otsu: int | None = None


@dataclass(frozen=True)
class DetectionResult:
    edge_map: EdgeMap
    segments: tuple[EdgeSegment, ...]
    thresholds: ResolvedThresholds
    diagnostic: str | None = None


def suppress_weak(g: GradientField, grad_thr: float) -> GradientField:
    """Zero every magnitude below ``grad_thr``; orientation is preserved."""
    if grad_thr < 0:
        raise ValueError("grad_thr must be non-negative")
    magnitude = np.where(g.magnitude < grad_thr, 0.0, g.magnitude)
    return GradientField(g.gx, g.gy, magnitude, g.vertical)


def _replicated_neighbors(m: np.ndarray):
    left = np.empty_like(m)
    left[:, 1:] = m[:, :-1]
    left[:, 0] = m[:, 0]
    right = np.empty_like(m)
    right[:, :-1] = m[:, 1:]
    right[:, -1] = m[:, -1]
    up = np.empty_like(m)
    up[1:, :] = m[:-1, :]
    up[0, :] = m[0, :]
    down = np.empty_like(m)
    down[:-1, :] = m[1:, :]
    down[-1, :] = m[-1, :]
    return left, right, up, down


def extract_anchors(g: GradientField, anchor_thr: float, scan_interval: int = 1) -> AnchorList:
    """Find directional local maxima of a suppressed field on the scan grid.

    The grid tests every pixel of rows y = 0, si, 2si, ... plus the
    symmetric columns, so scan_interval 1 means every pixel.  A pixel
    qualifies when its magnitude is positive and exceeds both neighbours
    across the edge direction by at least ``anchor_thr`` (neighbours are
    replicated at the border).
    """
    if scan_interval < 1:
        raise ValueError("scan_interval must be >= 1")
    m = g.magnitude
    left, right, up, down = _replicated_neighbors(m)
    across_vertical = (m - left >= anchor_thr) & (m - right >= anchor_thr)
    across_horizontal = (m - up >= anchor_thr) & (m - down >= anchor_thr)
    ok = (m > 0) & np.where(g.vertical, across_vertical, across_horizontal)
    if scan_interval > 1:
        ys = np.arange(m.shape[0])[:, None]
        xs = np.arange(m.shape[1])[None, :]
        ok &= (ys % scan_interval == 0) | (xs % scan_interval == 0)
    rows, cols = np.nonzero(ok)
    return AnchorList(tuple((int(x), int(y)) for y, x in zip(rows, cols)))


_UP, _DOWN, _LEFT, _RIGHT = 0, 1, 2, 3


def _ahead(x: int, y: int, d: int):
    if d == _UP:
        return ((x - 1, y - 1), (x, y - 1), (x + 1, y - 1))
    if d == _DOWN:
        return ((x - 1, y + 1), (x, y + 1), (x + 1, y + 1))
    if d == _LEFT:
        return ((x - 1, y - 1), (x - 1, y), (x - 1, y + 1))
    return ((x + 1, y - 1), (x + 1, y), (x + 1, y + 1))


def _best_ahead(mag, x: int, y: int, d: int, w: int, h: int):
    """Highest-magnitude candidate ahead; first wins ties."""
    best = None
    best_mag = -1.0
    for cx, cy in _ahead(x, y, d):
        if 0 <= cx < w and 0 <= cy < h:
            m = mag[cy, cx]
            if m > best_mag:
                best = (cx, cy)
                best_mag = m
    return best, best_mag


def _walk(mag, vertical, visited, x: int, y: int, d: int) -> list[tuple[int, int]]:
    h, w = mag.shape
    path: list[tuple[int, int]] = []
    while True:
        nxt, nxt_mag = _best_ahead(mag, x, y, d, w, h)
        if nxt is None or nxt_mag <= 0.0 or visited[nxt[1], nxt[0]]:
            return path
        x, y = nxt
        visited[y, x] = True
        path.append((x, y))
        if vertical[y, x]:
            if d in (_LEFT, _RIGHT):
                up_mag = _best_ahead(mag, x, y, _UP, w, h)[1]
                down_mag = _best_ahead(mag, x, y, _DOWN, w, h)[1]
                d = _UP if up_mag >= down_mag else _DOWN
        else:
            if d in (_UP, _DOWN):
                left_mag = _best_ahead(mag, x, y, _LEFT, w, h)[1]
                right_mag = _best_ahead(mag, x, y, _RIGHT, w, h)[1]
                d = _LEFT if left_mag >= right_mag else _RIGHT
    return path


def route_from_anchor(g: GradientField, anchor: tuple[int, int], visited: np.ndarray) -> EdgeSegment:
    """Trace one segment from an anchor over a suppressed field.

    ``visited`` is the shared edge mask: every traversed pixel is marked
    before returning, and walks stop on already-marked cells, so pixels
    never repeat across segments.
    """
    x, y = anchor
    mag = g.magnitude
    if mag[y, x] <= 0:
        raise ValueError(f"anchor {anchor} has no positive magnitude")
    visited[y, x] = True
    if g.vertical[y, x]:
        first_dir, second_dir = _UP, _DOWN
    else:
        first_dir, second_dir = _LEFT, _RIGHT
    first = _walk(mag, g.vertical, visited, x, y, first_dir)
    second = _walk(mag, g.vertical, visited, x, y, second_dir)
    return EdgeSegment(tuple(reversed(first)) + ((x, y),) + tuple(second))


def _resolve_auto(smoothed: GrayImage, field: GradientField, mode: Auto):
    source = magnitude_histogram(field.magnitude) if mode.on_gradient else histogram(smoothed)
    otsu = otsu_threshold(source)
    auto = derive_ed_thresholds(otsu.threshold, mode.grad_ratio, mode.anchor_ratio)
    return ResolvedThresholds("auto", auto.grad_thr, auto.anchor_thr, 1, auto.t_otsu)


def detect_edges(img: GrayImage, params: DetectionParams) -> DetectionResult:
    """Run the full detector and return the edge map, segments and thresholds.

    In Auto mode a histogram with fewer than two populated levels (for
    example a uniform image) cannot be split; the result is then an empty
    edge map with a diagnostic instead of an error.
    """
    smoothed = smooth(img, gaussian_kernel(params.gaussian_size))
    field = gradient_field(smoothed, params.operator, params.magnitude_mode)

    if isinstance(params.mode, Auto):
        try:
            thresholds = _resolve_auto(smoothed, field, params.mode)
        except DegenerateHistogramError as exc:
            empty = EdgeMap(np.zeros(img.pixels.shape, dtype=bool))
            resolved = ResolvedThresholds("auto", None, None, 1, None)
            return DetectionResult(empty, (), resolved, diagnostic=f"no edges detected: {exc}")
    else:
        thresholds = ResolvedThresholds(
            "manual", params.mode.grad_thr, params.mode.anchor_thr, params.mode.scan_interval
        )

    suppressed = suppress_weak(field, thresholds.grad_thr)
    anchors = extract_anchors(suppressed, thresholds.anchor_thr, thresholds.scan_interval)

    # strongest ridges claim pixels first; stable sort keeps row-major ties
    xs = np.array([x for x, _ in anchors.anchors], dtype=np.intp)
    ys = np.array([y for _, y in anchors.anchors], dtype=np.intp)
    order = np.argsort(-suppressed.magnitude[ys, xs], kind="stable") if len(anchors) else []

    visited = np.zeros(img.pixels.shape, dtype=bool)
    segments = []
    for idx in order:
        anchor = anchors.anchors[idx]
        if visited[anchor[1], anchor[0]]:
            continue
        segments.append(route_from_anchor(suppressed, anchor, visited))
    if params.min_segment_length > 1:
        segments = [s for s in segments if len(s) >= params.min_segment_length]

    edge_map = EdgeMap.from_segments(img.pixels.shape, segments)
    return DetectionResult(edge_map, tuple(segments), thresholds)


def segments_to_text(segments) -> str:
    """One segment per line as space-separated ``x,y`` pairs."""
    return "\n".join(" ".join(f"{x},{y}" for x, y in seg.pixels) for seg in segments) + "\n"
