"""Edge-drawing edge-segment detection with automatic Otsu-derived thresholds.

The pipeline smooths, computes a gradient field with one of eight 3x3
first-order operators, suppresses weak pixels, extracts anchor peaks and
routes them into 8-connected edge segments.  Thresholds are either
explicit or derived per image from the Otsu split.  A matching harness
scores edge maps against ground truth with tolerance-matched
precision/recall/F1, and the CLI adds grid sweeps and original-versus-
proposed comparison reports.
"""

from .raster import FormatError, GrayImage, RgbImage, load_raster, rgb_to_gray, save_raster
from .gradient import (
    OPERATORS,
    GaussianKernel,
    GradientField,
    ImageTooSmallError,
    Kernel3x3,
    UnknownOperatorError,
    combine_magnitude,
    convolve3x3,
    gaussian_kernel,
    gradient_field,
    kernel_for,
    magnitude_to_gray,
    smooth,
)
from .thresholding import (
    AutoThresholds,
    DegenerateHistogramError,
    Histogram256,
    OtsuResult,
    derive_ed_thresholds,
    histogram,
    magnitude_histogram,
    otsu_threshold,
)
from .drawing import (
    AnchorList,
    Auto,
    DetectionParams,
    DetectionResult,
    EdgeMap,
    EdgeSegment,
    Manual,
    ResolvedThresholds,
    detect_edges,
    extract_anchors,
    route_from_anchor,
    segments_to_text,
    suppress_weak,
)
from .evaluation import (
    DEFAULT_TOLERANCE,
    DatasetResult,
    EvalResult,
    MatchResult,
    aggregate,
    match_edge_maps,
    score,
)
from .dataset import DatasetError, ImagePair, dataset_pairs, find_pairs, load_edge_map, load_gray
from .harness import BEST_MANUAL, SweepGrid, evaluate_params, run_compare, run_sweep

__version__ = "0.1.0"

__all__ = [
    "FormatError",
    "GrayImage",
    "RgbImage",
    "load_raster",
    "rgb_to_gray",
    "save_raster",
    "OPERATORS",
    "GaussianKernel",
    "GradientField",
    "ImageTooSmallError",
    "Kernel3x3",
    "UnknownOperatorError",
    "combine_magnitude",
    "convolve3x3",
    "gaussian_kernel",
    "gradient_field",
    "kernel_for",
    "magnitude_to_gray",
    "smooth",
    "AutoThresholds",
    "DegenerateHistogramError",
    "Histogram256",
    "OtsuResult",
    "derive_ed_thresholds",
    "histogram",
    "magnitude_histogram",
    "otsu_threshold",
    "AnchorList",
    "Auto",
    "DetectionParams",
    "DetectionResult",
    "EdgeMap",
    "EdgeSegment",
    "Manual",
    "ResolvedThresholds",
    "detect_edges",
    "extract_anchors",
    "route_from_anchor",
    "segments_to_text",
    "suppress_weak",
    "DEFAULT_TOLERANCE",
    "DatasetResult",
    "EvalResult",
    "MatchResult",
    "aggregate",
    "match_edge_maps",
    "score",
    "DatasetError",
    "ImagePair",
    "dataset_pairs",
    "find_pairs",
    "load_edge_map",
    "load_gray",
    "BEST_MANUAL",
    "SweepGrid",
    "evaluate_params",
    "run_compare",
    "run_sweep",
    "__version__",
]
