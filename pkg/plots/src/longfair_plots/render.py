"""Render sweep aggregate CSVs into the three standard figures.

Input is the aggregate CSV produced by the sweep harness (header
alpha,n,trials,failrate_g0,se_g0,failrate_g1,se_g1,solution_rate,
se_sol,mean_acc,se_acc). Each figure kind plots one line per alpha
against n on a log axis with a shaded +-1 SE band. Output is SVG by
default so the plotted structure stays assertable as text: every series
carries a ``series-...`` group id and the optional horizontal reference
line carries ``delta-reference``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

plt.rcParams["svg.fonttype"] = "none"  # keep labels as text in the SVG

FIGURE_KINDS = ("failure_rate", "solution_rate", "accuracy")

_REQUIRED = {
    "failure_rate": ("alpha", "n", "failrate_g0", "se_g0",
                     "failrate_g1", "se_g1"),
    "solution_rate": ("alpha", "n", "solution_rate", "se_sol"),
    "accuracy": ("alpha", "n", "mean_acc", "se_acc"),
}


class MissingColumnError(ValueError):
    def __init__(self, column: str):
        self.column = column
        super().__init__(f"aggregate CSV is missing column {column!r}")


@dataclass(frozen=True)
class PlotSpec:
    input_csv: str
    figure_kind: str
    output_image: str
    delta_line: float | None = None

    def __post_init__(self):
        if self.figure_kind not in FIGURE_KINDS:
            raise ValueError(
                f"figure_kind must be one of {FIGURE_KINDS}, "
                f"got {self.figure_kind!r}")


def _read_rows(path: str, kind: str) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in _REQUIRED[kind]:
            if column not in header:
                raise MissingColumnError(column)
        rows = []
        for raw in reader:
            row = {"alpha": float(raw["alpha"]), "n": int(raw["n"])}
            for key in _REQUIRED[kind][2:]:
                row[key] = float(raw[key]) if raw[key] != "" else math.nan
            rows.append(row)
    if not rows:
        raise ValueError("aggregate CSV has no data rows")
    return rows


def _series(rows: list[dict], value_key: str, se_key: str):
    """Per-alpha (n, value, se) triples in increasing n order."""
    alphas = sorted({r["alpha"] for r in rows})
    for alpha in alphas:
        mine = sorted((r for r in rows if r["alpha"] == alpha),
                      key=lambda r: r["n"])
        ns = [r["n"] for r in mine]
        vals = [r[value_key] for r in mine]
        ses = [r[se_key] for r in mine]
        yield alpha, ns, vals, ses


def _plot_series(ax, rows, value_key, se_key, gid_prefix):
    for alpha, ns, vals, ses in _series(rows, value_key, se_key):
        if all(math.isnan(v) for v in vals):
            continue
        (line,) = ax.plot(ns, vals, marker="o", markersize=3,
                          label=f"alpha={alpha:g}")
        line.set_gid(f"series-{gid_prefix}-alpha-{alpha:g}")
        lo = [v - s for v, s in zip(vals, ses)]
        hi = [v + s for v, s in zip(vals, ses)]
        band = ax.fill_between(ns, lo, hi, alpha=0.2,
                               color=line.get_color())
        band.set_gid(f"band-{gid_prefix}-alpha-{alpha:g}")
    ax.set_xscale("log", base=2)
    ax.set_xlabel("training examples (n)")


def _add_delta_line(ax, delta: float):
    line = ax.axhline(delta, color="black", linewidth=1.0, linestyle="--")
    line.set_gid("delta-reference")


def render(spec: PlotSpec) -> str:
    """Render the figure described by spec; returns the output path."""
    rows = _read_rows(spec.input_csv, spec.figure_kind)

    if spec.figure_kind == "failure_rate":
        fig, axes = plt.subplots(1, 2, figsize=(9, 3.6), sharey=True)
        for ax, constraint in zip(axes, ("g0", "g1")):
            _plot_series(ax, rows, f"failrate_{constraint}",
                         f"se_{constraint}", constraint)
            ax.set_title(f"constraint {constraint}")
            ax.set_ylabel("failure rate")
            if spec.delta_line is not None:
                _add_delta_line(ax, spec.delta_line)
        axes[0].legend()
    else:
        fig, ax = plt.subplots(figsize=(5.2, 3.6))
        if spec.figure_kind == "solution_rate":
            _plot_series(ax, rows, "solution_rate", "se_sol", "solution")
            ax.set_ylabel("probability of returning a solution")
        else:
            _plot_series(ax, rows, "mean_acc", "se_acc", "accuracy")
            ax.set_ylabel("accuracy of returned solutions")
        if spec.delta_line is not None:
            _add_delta_line(ax, spec.delta_line)
        ax.legend()

    fig.tight_layout()
    fig.savefig(spec.output_image)
    plt.close(fig)
    return spec.output_image
