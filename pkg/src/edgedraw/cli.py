"""Command-line entry point: detect, sweep, eval, compare.

Every command writes its delimited output (and figures, where a report
has something to plot) under --out.  A key=value --config file supplies
flag defaults; explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dataset import DatasetError, find_pairs, load_edge_map, load_gray
from .drawing import Auto, DetectionParams, Manual, detect_edges, segments_to_text
from .evaluation import DEFAULT_TOLERANCE, aggregate, match_edge_maps, score
from .gradient import OPERATORS, gaussian_kernel, gradient_field, magnitude_to_gray, smooth
from .harness import SweepGrid, run_compare, run_sweep
from .raster import FormatError, save_raster
from . import report

# word forms only: bare digits stay ordinary values (si = 1 is not a toggle)
_TRUE = {"true", "yes", "on"}
_FALSE = {"false", "no", "off"}


def _read_config(path: str) -> dict[str, str]:
    entries: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        entries[key.strip().replace("-", "_")] = value.strip()
    return entries


def _apply_config_defaults(subparser: argparse.ArgumentParser, path: str) -> None:
    """Install config entries as typed defaults; explicit flags still win."""
    by_dest = {action.dest: action for action in subparser._actions}
    defaults = {}
    for dest, value in _read_config(path).items():
        action = by_dest.get(dest)
        if action is None:
            raise ValueError(f"{path}: unknown config key {dest!r}")
        convert = action.type or str
        if isinstance(action, argparse._StoreTrueAction):
            if value.lower() not in _TRUE | _FALSE:
                raise ValueError(f"{path}: {dest} expects a boolean, got {value!r}")
            defaults[dest] = value.lower() in _TRUE
        elif action.nargs in ("+", "*"):
            defaults[dest] = [convert(v) for v in value.split()]
        else:
            defaults[dest] = convert(value)
    subparser.set_defaults(**defaults)


def _add_common_detect_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--operator", default="sobel", help=f"one of: {', '.join(OPERATORS)}")
    p.add_argument("--gk", type=int, default=9, help="Gaussian kernel size (odd, 3..15)")
    p.add_argument("--magnitude", choices=("approx", "exact"), default="approx")


def build_parser():
    """Return (parser, subparsers-by-command)."""
    parser = argparse.ArgumentParser(prog="edgedraw", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {}

    p = commands["detect"] = sub.add_parser("detect", help="detect edge segments in one image")
    p.add_argument("image", help="input PGM or PNG")
    _add_common_detect_flags(p)
    p.add_argument("--auto", action="store_true", help="derive thresholds from the Otsu split")
    p.add_argument("--grad-thr", type=float, help="manual gradient threshold")
    p.add_argument("--anchor-thr", type=float, help="manual anchor threshold")
    p.add_argument("--si", type=int, default=1, help="manual scan interval")
    p.add_argument("--min-segment-length", type=int, default=1)
    p.add_argument("--edge-format", choices=("pgm", "png"), default="pgm")
    p.add_argument("--dump-gradient", action="store_true", help="also write the rescaled magnitude map")
    p.add_argument("--segments", action="store_true", help="also write segments as x,y chains")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--config", help="key=value defaults file")

    p = commands["sweep"] = sub.add_parser("sweep", help="grid-sweep manual parameters over a dataset")
    p.add_argument("root", help="dataset root containing images/ and gt/")
    p.add_argument("--operator", nargs="+", default=["sobel"])
    p.add_argument("--gk", type=int, nargs="+", default=list(SweepGrid().gk_values))
    p.add_argument("--gt", type=float, nargs="+", default=list(SweepGrid().gt_values))
    p.add_argument("--ta", type=float, nargs="+", default=list(SweepGrid().ta_values))
    p.add_argument("--si", type=int, nargs="+", default=list(SweepGrid().si_values))
    p.add_argument("--magnitude", choices=("approx", "exact"), default="approx")
    p.add_argument("--tolerance", type=int, default=DEFAULT_TOLERANCE)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="edgedraw_out")
    p.add_argument("--config", help="key=value defaults file")

    p = commands["eval"] = sub.add_parser("eval", help="score predicted edge maps against ground truth")
    p.add_argument("pred_dir")
    p.add_argument("gt_dir")
    p.add_argument("--tolerance", type=int, default=DEFAULT_TOLERANCE)
    p.add_argument("--out", default="edgedraw_out")
    p.add_argument("--config", help="key=value defaults file")

    p = commands["compare"] = sub.add_parser("compare", help="original fixed thresholds vs proposed auto mode")
    p.add_argument("root", help="dataset root containing images/ and gt/")
    p.add_argument("--operator", nargs="+", default=list(OPERATORS))
    p.add_argument("--gk", type=int, default=9, help="Gaussian size for the proposed runs")
    p.add_argument("--magnitude", choices=("approx", "exact"), default="approx")
    p.add_argument("--tolerance", type=int, default=DEFAULT_TOLERANCE)
    p.add_argument("--out", default="edgedraw_out")
    p.add_argument("--config", help="key=value defaults file")

    return parser, commands


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _threshold_report(args, image_path, result) -> str:
    lines = [
        f"image: {image_path}",
        f"operator: {args.operator}",
        f"gaussian_size: {args.gk}",
        f"magnitude: {args.magnitude}",
        f"mode: {result.thresholds.mode}",
        f"t_otsu: {result.thresholds.t_otsu if result.thresholds.t_otsu is not None else 'none'}",
        f"grad_thr: {result.thresholds.grad_thr if result.thresholds.grad_thr is not None else 'none'}",
        f"anchor_thr: {result.thresholds.anchor_thr if result.thresholds.anchor_thr is not None else 'none'}",
        f"scan_interval: {result.thresholds.scan_interval}",
        f"segments: {len(result.segments)}",
        f"edge_pixels: {result.edge_map.edge_count}",
    ]
    if result.diagnostic:
        lines.append(f"diagnostic: {result.diagnostic}")
    return "\n".join(lines) + "\n"


def cmd_detect(args) -> int:
    if args.auto:
        mode = Auto()
    else:
        if args.grad_thr is None or args.anchor_thr is None:
            raise ValueError("manual mode needs --grad-thr and --anchor-thr (or pass --auto)")
        mode = Manual(args.grad_thr, args.anchor_thr, args.si)
    params = DetectionParams(
        operator=args.operator,
        gaussian_size=args.gk,
        mode=mode,
        magnitude_mode=args.magnitude,
        min_segment_length=args.min_segment_length,
    )
    image_path = Path(args.image)
    img = load_gray(image_path)
    result = detect_edges(img, params)

    out = _outdir(args)
    stem = image_path.stem
    save_raster(result.edge_map.to_gray(), out / f"{stem}.edges.{args.edge_format}")
    report_path = out / f"{stem}.report.txt"
    report_path.write_text(_threshold_report(args, image_path, result), encoding="utf-8")
    if args.segments:
        (out / f"{stem}.segments.txt").write_text(segments_to_text(result.segments), encoding="utf-8")
    if args.dump_gradient:
        smoothed = smooth(img, gaussian_kernel(args.gk))
        field = gradient_field(smoothed, args.operator, args.magnitude)
        save_raster(magnitude_to_gray(field), out / f"{stem}.gradient.pgm")
    print(report_path.read_text(encoding="utf-8"), end="")
    return 0


def cmd_sweep(args) -> int:
    grid = SweepGrid(
        gk_values=tuple(args.gk),
        gt_values=tuple(args.gt),
        ta_values=tuple(args.ta),
        si_values=tuple(args.si),
        operators=tuple(args.operator),
    )
    out = _outdir(args)
    manifest = run_sweep(
        args.root,
        grid,
        tolerance=args.tolerance,
        jobs=args.jobs,
        magnitude_mode=args.magnitude,
        output_dir=str(out),
    )
    report.write_rows(out / "sweep_variants.csv", manifest.variant_rows, report.VARIANT_ROW_COLUMNS)
    report.write_rows(out / "sweep_images.csv", manifest.image_rows, report.IMAGE_ROW_COLUMNS)
    report.save_sweep_figure(out / "sweep_tuning.png", manifest.variant_rows)
    (out / "sweep_manifest.json").write_text(
        json.dumps(
            {
                "dataset_root": manifest.dataset_root,
                "output_dir": manifest.output_dir,
                "tolerance": manifest.tolerance,
                "variants": len(manifest.variant_rows),
                "image_rows": len(manifest.image_rows),
                "grid": {
                    "operators": list(grid.operators),
                    "gk": list(grid.gk_values),
                    "gt": list(grid.gt_values),
                    "ta": list(grid.ta_values),
                    "si": list(grid.si_values),
                },
            },
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )
    best = manifest.variant_rows[0]
    print(
        f"{len(manifest.variant_rows)} variants -> {out / 'sweep_variants.csv'}\n"
        f"best: operator={best['operator']} GK={best['gk']} GT={best['grad_thr']:g} "
        f"TA={best['anchor_thr']:g} SI={best['si']} F1={best['f1']:.3f}"
    )
    return 0


def cmd_eval(args) -> int:
    pairs = find_pairs(args.pred_dir, args.gt_dir)
    rows = []
    per_image = []
    failures = 0
    for pair in pairs:
        try:
            pred = load_edge_map(pair.image_path)
            gt = load_edge_map(pair.gt_path)
            result = score(match_edge_maps(pred, gt, args.tolerance))
        except (ValueError, OSError) as exc:
            failures += 1
            print(f"error: {pair.stem}: {exc}", file=sys.stderr)
            continue
        per_image.append(result)
        rows.append(
            {
                "image_id": pair.stem,
                "tp": result.match.tp,
                "fp": result.match.fp,
                "fn": result.match.fn,
                "precision": result.precision,
                "recall": result.recall,
                "f1": result.f1,
            }
        )
    out = _outdir(args)
    report.write_rows(out / "eval.csv", rows, report.IMAGE_ROW_COLUMNS)
    if rows:
        report.save_eval_figure(out / "eval_scores.png", rows)
        pooled = aggregate(per_image)
        print(
            f"micro P={pooled.micro.precision:.3f} R={pooled.micro.recall:.3f} "
            f"F1={pooled.micro.f1:.3f} | macro P={pooled.macro_precision:.3f} "
            f"R={pooled.macro_recall:.3f} F1={pooled.macro_f1:.3f}"
        )
    return 1 if failures else 0


def cmd_compare(args) -> int:
    table_rows, image_rows = run_compare(
        args.root,
        operators=args.operator,
        tolerance=args.tolerance,
        gaussian_size=args.gk,
        magnitude_mode=args.magnitude,
    )
    out = _outdir(args)
    report.write_rows(out / "compare.csv", table_rows, report.COMPARE_ROW_COLUMNS)
    report.write_rows(out / "compare_images.csv", image_rows, report.IMAGE_ROW_COLUMNS)
    text = report.compare_text(table_rows)
    (out / "compare.txt").write_text(text, encoding="utf-8")
    report.save_compare_figure(out / "compare_operators.png", table_rows)
    print(text, end="")
    return 0


_COMMANDS = {"detect": cmd_detect, "sweep": cmd_sweep, "eval": cmd_eval, "compare": cmd_compare}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        parser, subparsers = build_parser()
        if "--config" in argv:
            at = argv.index("--config")
            if at + 1 >= len(argv):
                raise ValueError("--config needs a file path")
            if not argv or argv[0] not in subparsers:
                raise ValueError("--config must follow a subcommand")
            _apply_config_defaults(subparsers[argv[0]], argv[at + 1])
            argv = argv[:at] + argv[at + 2 :]
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except (OSError, ValueError, DatasetError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
