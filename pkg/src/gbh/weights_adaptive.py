"""Data-adaptive weight estimators and the procedures built from them.

The estimators replace each unknown null proportion by a threshold-count
statistic: with a tuning threshold ``lambda`` in (0, 1), the count
``R = #{p-values <= lambda}`` in a structural unit drives the estimated
weight

    w_hat = [(size - R + 1) / (scope_size * (1 - lambda))]
            * [(scope_R + adjust) / R],

which shrinks for units rich in small p-values and blows up to +inf when
a unit shows none at all (R == 0).  Two-way variants combine row, column,
and cell components harmonically, mirroring the oracle formulas.

The module also carries the competitor estimators used in benchmark
studies (the least-slope and two-stage group estimates and the plain
threshold-count estimate of the overall null proportion) plus
``run_procedure``, which assembles any supported procedure into a single
weighted step-up run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from .core import (
    OneWayLayout,
    ProportionTable,
    PValueSet,
    RejectionSet,
    TwoWayCellsLayout,
    TwoWayOnePerCellLayout,
    WeightAssignment,
)
from .errors import (
    BadAlpha,
    BadLambda,
    EmptyGroup,
    OutOfRange,
    UnequalCells,
    VariantMismatch,
)
from .stepup import StepUpConfig, plain_bh, weighted_bh
from .weights_oracle import (
    OracleVariant,
    oracle_weights,
    reciprocal,
    unit_weight,
)


class AdaptiveVariant(Enum):
    """Enumerated data-adaptive weight formulas."""

    ONE_WAY = "one_way"
    TWO_WAY_EQUAL_SPLIT = "two_way_equal_split"
    TWO_WAY_SIZE_ADJUSTED = "two_way_size_adjusted"
    CELLS_FOUR_TERM = "cells_four_term"
    CELLS_TWO_TERM = "cells_two_term"
    EQUAL_CELLS_FOUR_TERM = "equal_cells_four_term"
    EQUAL_CELLS_TWO_TERM = "equal_cells_two_term"


def _check_lambda(lam: float) -> float:
    lam = float(lam)
    if not (0.0 < lam < 1.0):
        raise BadLambda(f"lambda must lie in (0, 1), got {lam}")
    return lam


@dataclass(frozen=True)
class CountTable:
    """Counts of p-values <= lambda at every structural level."""

    lam: float
    total: int
    per_group: np.ndarray | None = None
    per_row: np.ndarray | None = None
    per_col: np.ndarray | None = None
    per_cell: np.ndarray | None = None


def threshold_counts(p: PValueSet, lam: float) -> CountTable:
    """Count p-values at or below ``lam`` in every structural unit."""
    lam = _check_lambda(lam)
    indicator = (p.values <= lam).astype(np.int64)
    total = int(indicator.sum())
    lay = p.layout
    if isinstance(lay, OneWayLayout):
        return CountTable(lam, total, per_group=lay.group_sums(indicator))
    if isinstance(lay, TwoWayOnePerCellLayout):
        grid = lay.as_grid(indicator)
        return CountTable(
            lam, total, per_row=grid.sum(axis=1), per_col=grid.sum(axis=0)
        )
    cells = lay.cell_sums(indicator)
    return CountTable(
        lam,
        total,
        per_row=cells.sum(axis=1),
        per_col=cells.sum(axis=0),
        per_cell=cells,
    )


def _component(unit_size, unit_r, scope_size, scope_r, adjust, lam):
    """Threshold-count weight component; unit_r == 0 gives +inf."""
    size = np.asarray(unit_size, dtype=float)
    r = np.asarray(unit_r, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = (
            (size - r + 1.0)
            / (np.asarray(scope_size, dtype=float) * (1.0 - lam))
            * (np.asarray(scope_r, dtype=float) + adjust)
            / r
        )
    return np.where(r == 0, np.inf, w)


def oneway_adaptive_weights(p: PValueSet, lam: float) -> WeightAssignment:
    """Estimated group weights for a one-way layout.

    With a single group the estimate collapses to the plain
    threshold-count estimate of the overall null proportion, so the
    procedure coincides with the naive adaptive step-up.
    """
    lay = p.layout
    if not isinstance(lay, OneWayLayout):
        raise VariantMismatch("one-way adaptive weights need a OneWayLayout")
    counts = threshold_counts(p, lam)
    m = lay.n_groups
    w_g = _component(
        lay.sizes_array(), counts.per_group, lay.size, counts.total, m - 1, lam
    )
    return WeightAssignment(lay, lay.expand_groups(w_g))


def twoway_oneper_adaptive_weights(
    p: PValueSet, lam: float, variant: AdaptiveVariant
) -> WeightAssignment:
    """Estimated weights for one-per-cell grids."""
    if variant not in (
        AdaptiveVariant.TWO_WAY_EQUAL_SPLIT,
        AdaptiveVariant.TWO_WAY_SIZE_ADJUSTED,
    ):
        raise VariantMismatch(f"{variant.value} is not a one-per-cell variant")
    lay = p.layout
    if not isinstance(lay, TwoWayOnePerCellLayout):
        raise VariantMismatch(
            "one-per-cell adaptive weights need a TwoWayOnePerCellLayout"
        )
    counts = threshold_counts(p, lam)
    m, n, total = lay.m, lay.n, lay.size
    w_row = _component(n, counts.per_row, total, counts.total, m - 1, lam)
    w_col = _component(m, counts.per_col, total, counts.total, n - 1, lam)
    if variant is AdaptiveVariant.TWO_WAY_EQUAL_SPLIT:
        inv = 0.5 * reciprocal(w_row)[:, None] + 0.5 * reciprocal(w_col)[None, :]
    else:
        inv = (
            m * reciprocal(w_row)[:, None] + n * reciprocal(w_col)[None, :]
        ) / (m + n)
    return WeightAssignment(lay, reciprocal(inv).ravel())


def twoway_cells_adaptive_weights(
    p: PValueSet,
    lam: float,
    variant: AdaptiveVariant,
    *,
    column_adjust_n: bool = False,
) -> WeightAssignment:
    """Estimated weights for grids with multiple hypotheses per cell.

    The four-term variants mix two cell-level components (cell counts
    judged against the parent row and against the parent column) with the
    row- and column-level components; the two-term variants keep only the
    latter pair.  ``EQUAL_CELLS_*`` variants require a common cell size.

    ``column_adjust_n`` affects only ``EQUAL_CELLS_FOUR_TERM``: by default
    both row and column terms are scaled by (m - 1); pass True to scale
    the column term by (n - 1) instead, which mirrors the oracle
    equal-cells four-term formula.
    """
    cells_variants = (
        AdaptiveVariant.CELLS_FOUR_TERM,
        AdaptiveVariant.CELLS_TWO_TERM,
        AdaptiveVariant.EQUAL_CELLS_FOUR_TERM,
        AdaptiveVariant.EQUAL_CELLS_TWO_TERM,
    )
    if variant not in cells_variants:
        raise VariantMismatch(f"{variant.value} is not a multi-cell variant")
    lay = p.layout
    if not isinstance(lay, TwoWayCellsLayout):
        raise VariantMismatch(
            "multi-cell adaptive weights need a TwoWayCellsLayout"
        )
    if variant in (
        AdaptiveVariant.EQUAL_CELLS_FOUR_TERM,
        AdaptiveVariant.EQUAL_CELLS_TWO_TERM,
    ):
        if np.unique(lay.sizes_grid()).size != 1:
            raise UnequalCells(f"{variant.value} requires equal cell sizes")

    counts = threshold_counts(p, lam)
    m, n, total = lay.m, lay.n, lay.size
    row_sizes = lay.row_sizes()
    col_sizes = lay.col_sizes()
    w_row = _component(row_sizes, counts.per_row, total, counts.total, m - 1, lam)
    w_col = _component(col_sizes, counts.per_col, total, counts.total, n - 1, lam)
    inv_row = reciprocal(w_row)[:, None]
    inv_col = reciprocal(w_col)[None, :]

    if variant is AdaptiveVariant.CELLS_TWO_TERM:
        inv = 0.5 * inv_row + 0.5 * inv_col
    elif variant is AdaptiveVariant.EQUAL_CELLS_TWO_TERM:
        inv = (m * inv_row + n * inv_col) / (m + n)
    else:
        w_cell_row = _component(
            lay.sizes_grid(),
            counts.per_cell,
            row_sizes[:, None],
            counts.per_row[:, None],
            n - 1,
            lam,
        )
        w_cell_col = _component(
            lay.sizes_grid(),
            counts.per_cell,
            col_sizes[None, :],
            counts.per_col[None, :],
            m - 1,
            lam,
        )
        inv_cr = reciprocal(w_cell_row)
        inv_cc = reciprocal(w_cell_col)
        if variant is AdaptiveVariant.CELLS_FOUR_TERM:
            inv = 0.25 * (inv_cr + inv_cc + inv_row + inv_col)
        else:
            row_coef = m - 1
            col_coef = (n - 1) if column_adjust_n else (m - 1)
            inv = (
                inv_cr
                + inv_cc
                + (np.zeros_like(inv_row) if row_coef == 0 else row_coef * inv_row)
                + (np.zeros_like(inv_col) if col_coef == 0 else col_coef * inv_col)
            ) / (m + n)
    return WeightAssignment(lay, lay.expand_cells(reciprocal(inv)))


def adaptive_weights(
    p: PValueSet, lam: float, variant: AdaptiveVariant
) -> WeightAssignment:
    """Dispatch to the estimator matching ``variant``."""
    if variant is AdaptiveVariant.ONE_WAY:
        return oneway_adaptive_weights(p, lam)
    if variant in (
        AdaptiveVariant.TWO_WAY_EQUAL_SPLIT,
        AdaptiveVariant.TWO_WAY_SIZE_ADJUSTED,
    ):
        return twoway_oneper_adaptive_weights(p, lam, variant)
    return twoway_cells_adaptive_weights(p, lam, variant)


def storey_pi0(p: PValueSet, lam: float, cap: bool = False) -> float:
    """Threshold-count estimate of the overall null proportion.

    The raw estimate (N - R + 1) / (N * (1 - lambda)) can exceed one;
    it is left uncapped by default so downstream weights match the
    estimator exactly.  Pass ``cap=True`` to clip at 1.
    """
    lam = _check_lambda(lam)
    n = p.size
    r = int((p.values <= lam).sum())
    est = (n - r + 1) / (n * (1.0 - lam))
    return min(est, 1.0) if cap else est


def lsl_pi0(group_pvalues) -> float:
    """Least-slope estimate of a group's null proportion.

    Scans the slopes l_i = (n - i + 1) / (1 - p_(i)) of the ordered
    p-values and stops at the first i >= 2 with l_i > l_{i-1}; the
    estimate is min((floor(l_i) + 1) / n, 1).  Returns 1 when the slopes
    keep decreasing (or the group has a single member).
    """
    pv = np.asarray(group_pvalues, dtype=float).ravel()
    if pv.size == 0:
        raise EmptyGroup("least-slope estimate needs at least one p-value")
    if (~((pv >= 0.0) & (pv <= 1.0))).any():
        raise OutOfRange("p-values must lie in [0, 1]")
    n = pv.size
    pv = np.sort(pv)
    prev = None
    for i in range(1, n + 1):
        denom = 1.0 - pv[i - 1]
        slope = math.inf if denom == 0.0 else (n - i + 1) / denom
        if i >= 2 and slope > prev:
            if math.isinf(slope):
                return 1.0
            return min((math.floor(slope) + 1) / n, 1.0)
        prev = slope
    return 1.0


def tst_pi0(group_pvalues, alpha: float) -> float:
    """Two-stage estimate of a group's null proportion.

    Runs the plain step-up procedure within the group at the deflated
    level alpha / (1 + alpha) and returns (n - rejections) / n.
    """
    pv = np.asarray(group_pvalues, dtype=float).ravel()
    if pv.size == 0:
        raise EmptyGroup("two-stage estimate needs at least one p-value")
    alpha = float(alpha)
    if not (0.0 < alpha < 1.0):
        raise BadAlpha(f"alpha must lie in (0, 1), got {alpha}")
    stage = StepUpConfig(alpha / (1.0 + alpha))
    group = PValueSet(OneWayLayout((pv.size,)), pv)
    r = plain_bh(group, stage).n_rejected
    return (pv.size - r) / pv.size


# --- procedure specifications ------------------------------------------------


@dataclass(frozen=True)
class PlainBH:
    """The ordinary step-up procedure, ignoring structure."""


@dataclass(frozen=True)
class NaiveAdaptiveBH:
    """Step-up with one uniform estimated weight for all hypotheses."""

    lam: float = 0.5


@dataclass(frozen=True)
class OracleGBH:
    """Weighted step-up using known null proportions.

    ``proportions`` may be left None when the procedure is driven by a
    simulation runner, which fills it from the generated truth mask.
    """

    variant: OracleVariant
    proportions: ProportionTable | None = None


@dataclass(frozen=True)
class AdaptiveGBH:
    """Weighted step-up with threshold-count estimated weights."""

    variant: AdaptiveVariant
    lam: float = 0.5


@dataclass(frozen=True)
class LslGBH:
    """One-way grouped step-up with least-slope group estimates."""


@dataclass(frozen=True)
class TstGBH:
    """One-way grouped step-up with two-stage group estimates."""


ProcedureSpec = Union[PlainBH, NaiveAdaptiveBH, OracleGBH, AdaptiveGBH, LslGBH, TstGBH]


def _estimated_oneway_weights(p: PValueSet, estimate) -> WeightAssignment:
    """Plug per-group estimates into the one-way oracle weight formula."""
    lay = p.layout
    if not isinstance(lay, OneWayLayout):
        raise VariantMismatch("group-estimate procedures need a OneWayLayout")
    offsets = lay.offsets()
    sizes = lay.sizes_array()
    pi_g = np.array(
        [
            estimate(p.values[offsets[g] : offsets[g] + sizes[g]])
            for g in range(lay.n_groups)
        ]
    )
    pi0 = float(pi_g @ sizes / lay.size)
    w_g = unit_weight(pi_g, pi0)
    return WeightAssignment(lay, lay.expand_groups(w_g))


def procedure_weights(
    p: PValueSet, proc: ProcedureSpec, alpha: float
) -> WeightAssignment:
    """The weight assignment a procedure feeds to the step-up engine."""
    if isinstance(proc, PlainBH):
        return WeightAssignment(p.layout, np.ones(p.size))
    if isinstance(proc, NaiveAdaptiveBH):
        return WeightAssignment(
            p.layout, np.full(p.size, storey_pi0(p, proc.lam))
        )
    if isinstance(proc, OracleGBH):
        if proc.proportions is None:
            raise VariantMismatch(
                "oracle procedure needs proportions (or a simulation runner)"
            )
        return oracle_weights(proc.proportions, p.layout, proc.variant)
    if isinstance(proc, AdaptiveGBH):
        return adaptive_weights(p, proc.lam, proc.variant)
    if isinstance(proc, LslGBH):
        return _estimated_oneway_weights(p, lsl_pi0)
    if isinstance(proc, TstGBH):
        return _estimated_oneway_weights(p, lambda pv: tst_pi0(pv, alpha))
    raise VariantMismatch(f"unknown procedure spec {proc!r}")


def run_procedure(p: PValueSet, proc: ProcedureSpec, alpha: float) -> RejectionSet:
    """Assemble the procedure's weights and run the step-up engine."""
    return weighted_bh(p, procedure_weights(p, proc, alpha), StepUpConfig(alpha))
