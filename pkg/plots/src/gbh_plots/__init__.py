"""Render FDR and power curve figures from simulation result CSVs.

The input is the result CSV written by ``gbh simulate`` (or any file with
the same columns).  The figure has one column of panels per combination
of the panel keys, an FDR row on top (with a horizontal reference line at
the target level) and a power row below; within each panel there is one
line per procedure with a shaded band of +/- one standard error.

Plotting never recomputes statistics: every plotted point is a value read
from the CSV, so the numbers shown are exactly the numbers produced by
the simulation tool.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__version__ = "0.1.0"

_X_CANDIDATES = ("pi_rc", "pi", "lambda", "pi_dot", "pi_r", "pi_c")
_METRIC_COLUMNS = ("fdr_hat", "se_fdr", "power_hat", "se_power")


class PlotsError(Exception):
    """Raised when the CSV does not support the requested figure."""


@dataclass(frozen=True)
class FigureSpec:
    """What to plot and where to write it.

    ``x``, ``panels``, and ``alpha`` may be left None: the x column is
    auto-detected among the sweep columns, remaining varying sweep
    columns become panel keys, and the reference level is read from the
    CSV's alpha column.
    """

    csv_path: str
    out_path: str
    x: str | None = None
    series: str = "procedure"
    panels: tuple[str, ...] | None = None
    alpha: float | None = None


def load_rows(csv_path: str) -> list[dict]:
    """Read a result CSV, skipping comment lines that start with '#'."""
    with open(csv_path, "r", encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.DictReader(lines)
    if reader.fieldnames is None:
        raise PlotsError("input file is empty")
    rows = list(reader)
    if not rows:
        raise PlotsError("input contains a header but no data rows")
    return rows


def _check_columns(rows, names):
    missing = [c for c in names if c not in rows[0]]
    if missing:
        raise PlotsError(f"input is missing column(s): {missing}")


def _varying(rows, names):
    return [
        c for c in names
        if c in rows[0] and len({r[c] for r in rows if r[c] != ""}) > 1
    ]


def _resolve(spec: FigureSpec, rows):
    """Fill the auto-detected parts of the spec; validate columns."""
    _check_columns(rows, (spec.series,) + _METRIC_COLUMNS)
    x = spec.x
    if x is None:
        varying = _varying(rows, _X_CANDIDATES)
        if not varying:
            raise PlotsError(
                "no sweep column varies; pass --x to choose the x axis"
            )
        x = varying[0]
    _check_columns(rows, (x,))
    if spec.panels is None:
        panels = tuple(c for c in _varying(rows, _X_CANDIDATES) if c != x)
    else:
        panels = tuple(spec.panels)
        _check_columns(rows, panels)
    alpha = spec.alpha
    if alpha is None:
        _check_columns(rows, ("alpha",))
        levels = {r["alpha"] for r in rows}
        if len(levels) != 1:
            raise PlotsError(
                "alpha column is not constant; pass --alpha for the reference line"
            )
        alpha = float(levels.pop())
    return x, panels, alpha


def _panel_groups(rows, panels):
    if not panels:
        return [((), rows)]
    keys = sorted(
        {tuple(r[c] for c in panels) for r in rows},
        key=lambda key: tuple(float(v) for v in key),
    )
    return [
        (key, [r for r in rows if tuple(r[c] for c in panels) == key])
        for key in keys
    ]


def render_curves(spec: FigureSpec):
    """Render the figure described by ``spec`` and write it to disk.

    Returns the matplotlib Figure so callers (and tests) can inspect the
    plotted data.
    """
    rows = load_rows(spec.csv_path)
    x_col, panels, alpha = _resolve(spec, rows)
    groups = _panel_groups(rows, panels)

    procedures = []
    for r in rows:
        if r[spec.series] not in procedures:
            procedures.append(r[spec.series])

    n_cols = len(groups)
    fig, axes = plt.subplots(
        2, n_cols, figsize=(4.0 * n_cols, 6.5), squeeze=False, sharex="col"
    )
    metric_rows = (("fdr_hat", "se_fdr", "FDR"), ("power_hat", "se_power", "Power"))
    for col, (key, panel_rows) in enumerate(groups):
        title = ", ".join(f"{c}={v}" for c, v in zip(panels, key))
        for row_idx, (metric, se_col, label) in enumerate(metric_rows):
            ax = axes[row_idx][col]
            for proc in procedures:
                pts = sorted(
                    (
                        (float(r[x_col]), float(r[metric]), float(r[se_col]))
                        for r in panel_rows
                        if r[spec.series] == proc
                    ),
                    key=lambda t: t[0],
                )
                if not pts:
                    continue
                xs, ys, ses = (np.array(v) for v in zip(*pts))
                ax.plot(xs, ys, marker="o", markersize=3, label=proc)
                ax.fill_between(xs, ys - ses, ys + ses, alpha=0.2)
            if metric == "fdr_hat":
                ax.axhline(alpha, color="black", linestyle="--", linewidth=0.9)
            ax.set_ylabel(label)
            ax.set_xlabel(x_col)
            if title and row_idx == 0:
                ax.set_title(title, fontsize=9)
    axes[0][0].legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(spec.out_path)
    return fig
