"""Delimited output, aligned text tables, and figure rendering.

Every CSV written here re-parses to the in-memory values: floats are
serialized with repr-level precision and integers stay integers.
Figures are rendered headlessly to PNG next to the delimited output.
"""

from __future__ import annotations

import csv

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = [
    "IMAGE_ROW_COLUMNS",
    "VARIANT_ROW_COLUMNS",
    "COMPARE_ROW_COLUMNS",
    "write_rows",
    "read_rows",
    "compare_text",
    "save_compare_figure",
    "save_sweep_figure",
    "save_eval_figure",
]

IMAGE_ROW_COLUMNS = [
    "image_id",
    "operator",
    "mode",
    "grad_thr",
    "anchor_thr",
    "gk",
    "si",
    "t_otsu",
    "tp",
    "fp",
    "fn",
    "precision",
    "recall",
    "f1",
]

VARIANT_ROW_COLUMNS = [
    "operator",
    "gk",
    "grad_thr",
    "anchor_thr",
    "si",
    "tp",
    "fp",
    "fn",
    "precision",
    "recall",
    "f1",
    "macro_f1",
    "wall_s",
]

COMPARE_ROW_COLUMNS = ["operator", "mode", "recall", "precision", "f1", "tp", "fp", "fn"]

_INT_COLUMNS = {"gk", "si", "t_otsu", "tp", "fp", "fn"}
_STR_COLUMNS = {"image_id", "operator", "mode"}


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_rows(path, rows, columns) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell(row.get(col)) for col in columns])


def read_rows(path) -> list[dict]:
    """Parse a CSV written by write_rows back into typed row dicts."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        rows = []
        for raw in reader:
            row = {}
            for key, text in raw.items():
                if text == "":
                    row[key] = None
                elif key in _STR_COLUMNS:
                    row[key] = text
                elif key in _INT_COLUMNS:
                    row[key] = int(text)
                else:
                    row[key] = float(text)
            rows.append(row)
    return rows


def compare_text(table_rows) -> str:
    """Aligned two-rows-per-operator comparison table."""
    lines = [f"{'operator':<10} {'mode':<9} {'R':>6} {'P':>6} {'F1':>6}"]
    for row in table_rows:
        lines.append(
            f"{row['operator']:<10} {row['mode']:<9} "
            f"{row['recall']:>6.3f} {row['precision']:>6.3f} {row['f1']:>6.3f}"
        )
    return "\n".join(lines) + "\n"


def save_compare_figure(path, table_rows) -> None:
    """Grouped bars of R / P / F1 for the original and proposed runs."""
    operators = sorted({row["operator"] for row in table_rows}, key=lambda op: [
        r["operator"] for r in table_rows
    ].index(op))
    by_key = {(row["operator"], row["mode"]): row for row in table_rows}
    x = range(len(operators))
    fig, axes = plt.subplots(1, 3, figsize=(13, 3.6), sharey=True)
    for ax, metric in zip(axes, ("recall", "precision", "f1")):
        original = [by_key[(op, "original")][metric] for op in operators]
        proposed = [by_key[(op, "proposed")][metric] for op in operators]
        ax.bar([i - 0.2 for i in x], original, width=0.4, label="original")
        ax.bar([i + 0.2 for i in x], proposed, width=0.4, label="proposed")
        ax.set_title(metric.upper() if metric == "f1" else metric.capitalize())
        ax.set_xticks(list(x))
        ax.set_xticklabels(operators, rotation=45, ha="right")
        ax.set_ylim(0, 1)
    axes[0].set_ylabel("score")
    axes[0].legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_sweep_figure(path, variant_rows) -> None:
    """Best micro-F1 per value of each swept axis."""
    panels = [("gk", "Gaussian kernel size"), ("grad_thr", "gradient threshold"),
              ("anchor_thr", "anchor threshold"), ("si", "scan interval")]
    fig, axes = plt.subplots(2, 2, figsize=(9, 6))
    for ax, (key, label) in zip(axes.ravel(), panels):
        values = sorted({row[key] for row in variant_rows})
        best = [max(r["f1"] for r in variant_rows if r[key] == v) for v in values]
        ax.plot(values, best, marker="o")
        ax.set_xlabel(label)
        ax.set_ylabel("best F1")
        ax.set_ylim(0, 1)
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def save_eval_figure(path, image_rows) -> None:
    """Per-image precision / recall / F1 bars."""
    stems = [row["image_id"] for row in image_rows]
    x = range(len(stems))
    fig, ax = plt.subplots(figsize=(max(6, 0.6 * len(stems) + 2), 3.6))
    ax.bar([i - 0.25 for i in x], [r["precision"] for r in image_rows], width=0.25, label="P")
    ax.bar(list(x), [r["recall"] for r in image_rows], width=0.25, label="R")
    ax.bar([i + 0.25 for i in x], [r["f1"] for r in image_rows], width=0.25, label="F1")
    ax.set_xticks(list(x))
    ax.set_xticklabels(stems, rotation=45, ha="right")
    ax.set_ylim(0, 1)
    ax.set_ylabel("score")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
