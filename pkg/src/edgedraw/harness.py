"""Parameter sweeps and original-vs-proposed comparison runs.

Variants are pure per-image computations, so a sweep fans out across a
process pool when asked; rows are reassembled in variant order and the
final sort is stable, which makes results identical for any job count.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

from .dataset import ImagePair, dataset_pairs, load_edge_map, load_gray
from .drawing import Auto, DetectionParams, Manual, detect_edges
from .evaluation import DEFAULT_TOLERANCE, aggregate, match_edge_maps, score

__all__ = [
    "SweepGrid",
    "RunManifest",
    "BEST_MANUAL",
    "evaluate_params",
    "run_sweep",
    "run_compare",
]

# best fixed configuration found by grid search: GT=50, TA=10, GK=9, SI=1
BEST_MANUAL = {"grad_thr": 50.0, "anchor_thr": 10.0, "gaussian_size": 9, "scan_interval": 1}


@dataclass(frozen=True)
class SweepGrid:
    """Cartesian sweep axes; the default grid is GK {3,5,7,9}, GT 10..150
    step 10, TA 10..60 step 10, SI 1..5 (1800 variants per operator)."""

    gk_values: tuple[int, ...] = (3, 5, 7, 9)
    gt_values: tuple[float, ...] = tuple(float(v) for v in range(10, 151, 10))
    ta_values: tuple[float, ...] = tuple(float(v) for v in range(10, 61, 10))
    si_values: tuple[int, ...] = (1, 2, 3, 4, 5)
    operators: tuple[str, ...] = ("sobel",)

    def __post_init__(self):
        for name in ("gk_values", "gt_values", "ta_values", "si_values", "operators"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be non-empty")

    @property
    def variant_count(self) -> int:
        return (
            len(self.operators)
            * len(self.gk_values)
            * len(self.gt_values)
            * len(self.ta_values)
            * len(self.si_values)
        )

    def variants(self):
        """(operator, gk, gt, ta, si) tuples in deterministic grid order."""
        return [
            (op, gk, gt, ta, si)
            for op, gk, gt, ta, si in product(
                self.operators, self.gk_values, self.gt_values, self.ta_values, self.si_values
            )
        ]


@dataclass
class RunManifest:
    dataset_root: str
    output_dir: str
    tolerance: int
    variant_rows: list[dict] = field(default_factory=list)
    image_rows: list[dict] = field(default_factory=list)


def _row(image_id: str, params: DetectionParams, resolved, result) -> dict:
    return {
        "image_id": image_id,
        "operator": params.operator,
        "mode": resolved.mode,
        "grad_thr": resolved.grad_thr,
        "anchor_thr": resolved.anchor_thr,
        "gk": params.gaussian_size,
        "si": resolved.scan_interval,
        "t_otsu": resolved.t_otsu,
        "tp": result.match.tp,
        "fp": result.match.fp,
        "fn": result.match.fn,
        "precision": result.precision,
        "recall": result.recall,
        "f1": result.f1,
    }


def evaluate_params(params: DetectionParams, pairs_data, tolerance: int = DEFAULT_TOLERANCE):
    """Detect on every (image, gt) pair and score; returns (DatasetResult, rows)."""
    per_image = []
    rows = []
    for stem, img, gt in pairs_data:
        detection = detect_edges(img, params)
        result = score(match_edge_maps(detection.edge_map, gt, tolerance))
        per_image.append(result)
        rows.append(_row(stem, params, detection.thresholds, result))
    return aggregate(per_image), rows


def _load_pairs(pairs: list[ImagePair]):
    return [(p.stem, load_gray(p.image_path), load_edge_map(p.gt_path)) for p in pairs]


def _manual_params(variant, magnitude_mode: str) -> DetectionParams:
    op, gk, gt, ta, si = variant
    return DetectionParams(
        operator=op,
        gaussian_size=gk,
        mode=Manual(grad_thr=gt, anchor_thr=ta, scan_interval=si),
        magnitude_mode=magnitude_mode,
    )


# process-pool state: each worker loads the dataset once
_WORKER_DATA = None


def _sweep_init(pair_paths, tolerance, magnitude_mode):
    global _WORKER_DATA
    pairs = [ImagePair(*p) for p in pair_paths]
    _WORKER_DATA = (_load_pairs(pairs), tolerance, magnitude_mode)


def _sweep_task(indexed_variant):
    index, variant = indexed_variant
    pairs_data, tolerance, magnitude_mode = _WORKER_DATA
    started = time.perf_counter()
    pooled, rows = evaluate_params(_manual_params(variant, magnitude_mode), pairs_data, tolerance)
    return index, variant, pooled, rows, time.perf_counter() - started


def run_sweep(
    dataset_root,
    grid: SweepGrid = SweepGrid(),
    tolerance: int = DEFAULT_TOLERANCE,
    jobs: int = 1,
    magnitude_mode: str = "approx",
    output_dir: str = "",
) -> RunManifest:
    """Evaluate every grid variant over the dataset.

    Variant rows carry pooled micro scores and are sorted by descending
    micro-F1 (ties resolved by grid order); per-image rows stay in grid
    order.  Results do not depend on ``jobs``.
    """
    pairs = dataset_pairs(dataset_root)
    variants = grid.variants()
    manifest = RunManifest(str(dataset_root), str(output_dir), tolerance)

    indexed = list(enumerate(variants))
    if jobs > 1:
        pair_paths = [(p.stem, p.image_path, p.gt_path) for p in pairs]
        with ProcessPoolExecutor(
            max_workers=jobs,
            initializer=_sweep_init,
            initargs=(pair_paths, tolerance, magnitude_mode),
        ) as pool:
            outcomes = list(pool.map(_sweep_task, indexed, chunksize=16))
    else:
        _sweep_init([(p.stem, p.image_path, p.gt_path) for p in pairs], tolerance, magnitude_mode)
        outcomes = [_sweep_task(item) for item in indexed]

    outcomes.sort(key=lambda item: item[0])
    variant_rows = []
    for index, variant, pooled, rows, wall in outcomes:
        op, gk, gt, ta, si = variant
        variant_rows.append(
            {
                "operator": op,
                "gk": gk,
                "grad_thr": gt,
                "anchor_thr": ta,
                "si": si,
                "tp": pooled.micro.match.tp,
                "fp": pooled.micro.match.fp,
                "fn": pooled.micro.match.fn,
                "precision": pooled.micro.precision,
                "recall": pooled.micro.recall,
                "f1": pooled.micro.f1,
                "macro_f1": pooled.macro_f1,
                "wall_s": wall,
            }
        )
        manifest.image_rows.extend(rows)
    variant_rows.sort(key=lambda r: -r["f1"])  # stable: grid order breaks ties
    manifest.variant_rows = variant_rows
    return manifest


def run_compare(
    dataset_root,
    operators,
    tolerance: int = DEFAULT_TOLERANCE,
    gaussian_size: int = 9,
    magnitude_mode: str = "approx",
):
    """Fixed best-manual thresholds versus Auto mode for each operator.

    Returns (table_rows, image_rows): two table rows per operator, one for
    the original fixed-threshold run and one for the proposed automatic
    run, each with pooled recall/precision/F1.
    """
    pairs_data = _load_pairs(dataset_pairs(dataset_root))
    table_rows = []
    image_rows = []
    for op in operators:
        modes = (
            ("original", Manual(BEST_MANUAL["grad_thr"], BEST_MANUAL["anchor_thr"], BEST_MANUAL["scan_interval"])),
            ("proposed", Auto()),
        )
        for label, mode in modes:
            params = DetectionParams(
                operator=op,
                gaussian_size=gaussian_size if label == "proposed" else BEST_MANUAL["gaussian_size"],
                mode=mode,
                magnitude_mode=magnitude_mode,
            )
            pooled, rows = evaluate_params(params, pairs_data, tolerance)
            image_rows.extend(rows)
            table_rows.append(
                {
                    "operator": op,
                    "mode": label,
                    "recall": pooled.micro.recall,
                    "precision": pooled.micro.precision,
                    "f1": pooled.micro.f1,
                    "tp": pooled.micro.match.tp,
                    "fp": pooled.micro.match.fp,
                    "fn": pooled.micro.match.fn,
                }
            )
    return table_rows, image_rows
