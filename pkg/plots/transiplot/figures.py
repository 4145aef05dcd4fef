"""Grouped line plots over experiment CSV files.

Reads the flat CSV schema the experiment runner emits, averages a metric
over replicates per x value within each group, and draws one line-and-
marker series per group (or per metric column when several are given).
Pure function of the input file; no network, no state.
"""
from __future__ import annotations

import argparse
import csv
import sys
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


class PlotDataError(Exception):
    """Input CSV cannot support the requested figure."""


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: columns, grouping, labels and the output file."""

    input_csv: str
    x: str
    ys: tuple[str, ...]
    out: str
    group_by: str | None = None
    x_label: str | None = None
    y_label: str | None = None
    title: str | None = None


FIGURES = {
    "fig1-left": dict(x="mu_target", ys=("transitivity_global",),
                      group_by="model", x_label="mixing coefficient",
                      y_label="transitivity",
                      title="Transitivity against mixing, by seed model"),
    "fig1-right": dict(x="mu_target", ys=("transitivity_global",),
                       group_by="n_max", x_label="mixing coefficient",
                       y_label="transitivity",
                       title="Transitivity against mixing, by community cap"),
    "fig2": dict(x="tau", ys=("modularity_louvain", "modularity_infomap"),
                 group_by=None, x_label="triangle-stub coefficient",
                 y_label="modularity",
                 title="Detected modularity against the triangle share"),
    "fig2-transitivity": dict(x="tau", ys=("transitivity_global",),
                              group_by="mean_degree_target",
                              x_label="triangle-stub coefficient",
                              y_label="transitivity",
                              title="Transitivity against the triangle share"),
}


def read_rows(path) -> list[dict]:
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise PlotDataError(f"{path}: no data rows")
    return rows


def compute_group_means(rows: list[dict], x: str, ys: tuple[str, ...],
                        group_by: str | None):
    """Per-series replicate means.

    Returns {series_label: [(x_value, mean_y), ...]} with x ascending.
    A series is one (group value, y column) pair; the label drops the
    redundant part when only one group or one y column is present.
    """
    for col in (x, *ys) + ((group_by,) if group_by else ()):
        if col not in rows[0]:
            raise PlotDataError(f"column {col!r} missing from CSV header")
    buckets: dict = defaultdict(lambda: defaultdict(list))
    for row in rows:
        for y in ys:
            value = row[y]
            if value == "":
                continue
            group = row[group_by] if group_by else ""
            buckets[(group, y)][float(row[x])].append(float(value))
    if not buckets:
        raise PlotDataError("no numeric values found for the chosen columns")
    series = {}
    for (group, y), by_x in sorted(buckets.items()):
        if group_by and len(ys) > 1:
            label = f"{group_by}={group} {y}"
        elif group_by:
            label = f"{group_by}={group}" if group_by != "model" else group
        else:
            label = y
        points = sorted((xv, sum(vals) / len(vals))
                        for xv, vals in by_x.items())
        series[label] = points
    return series


def render(spec: FigureSpec) -> Path:
    """Draw the figure and write the image file; returns the output path."""
    rows = read_rows(spec.input_csv)
    series = compute_group_means(rows, spec.x, spec.ys, spec.group_by)
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    markers = "osD^vP*X"
    for i, (label, points) in enumerate(series.items()):
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        ax.plot(xs, ys, marker=markers[i % len(markers)], label=label)
    ax.set_xlabel(spec.x_label or spec.x)
    ax.set_ylabel(spec.y_label or spec.ys[0])
    if spec.title:
        ax.set_title(spec.title)
    ax.grid(True, alpha=0.3)
    ax.legend()
    out = Path(spec.out)
    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="transiplot",
        description="Render grouped line plots from experiment CSV files.")
    parser.add_argument("input_csv")
    parser.add_argument("--figure", choices=sorted(FIGURES),
                        help="builtin figure layout")
    parser.add_argument("--x", help="x column (custom figures)")
    parser.add_argument("--y", help="comma-separated y columns")
    parser.add_argument("--group-by", default=None)
    parser.add_argument("--out", required=True, help="image file to write")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.figure:
        preset = FIGURES[args.figure]
        spec = FigureSpec(input_csv=args.input_csv, out=args.out, **preset)
    elif args.x and args.y:
        spec = FigureSpec(input_csv=args.input_csv, x=args.x,
                          ys=tuple(args.y.split(",")), out=args.out,
                          group_by=args.group_by)
    else:
        print("error: pass --figure or both --x and --y", file=sys.stderr)
        return 2
    try:
        out = render(spec)
    except (PlotDataError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
