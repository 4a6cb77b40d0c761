"""Closed-form oracle weights computed from known null proportions.

Every variant builds on the same group-level weight

    unit_weight(u, parent) = u * (1 - parent) / (1 - u),

where ``u`` is the null proportion of a structural unit (group, row,
column, or cell) and ``parent`` the null proportion of the enclosing
scope.  Units with a small null proportion (many signals) get small
weights, making their members easier to reject; a unit that is entirely
null gets weight +inf, and an entirely significant unit gets weight 0.
Two-way variants combine row/column (and cell) unit weights harmonically.

Calibration: whenever all unit proportions involved are strictly between
0 and 1, the reciprocal weights of the true nulls sum to N, which is the
condition under which the weighted step-up procedure controls FDR at its
nominal level.  ``verify_weight_identity`` measures the residual.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .core import (
    Layout,
    OneWayLayout,
    ProportionTable,
    TruthMask,
    TwoWayCellsLayout,
    TwoWayOnePerCellLayout,
    WeightAssignment,
)
from .errors import LayoutMismatch, UnequalCells, VariantMismatch


class OracleVariant(Enum):
    """Enumerated oracle weight formulas."""

    ONE_WAY = "one_way"
    TWO_WAY_EQUAL_SPLIT = "two_way_equal_split"
    TWO_WAY_SIZE_ADJUSTED = "two_way_size_adjusted"
    CELLS_FOUR_TERM = "cells_four_term"
    CELLS_TWO_TERM = "cells_two_term"
    EQUAL_CELLS_TWO_TERM = "equal_cells_two_term"
    EQUAL_CELLS_FOUR_TERM = "equal_cells_four_term"


def unit_weight(pi_unit, pi_parent) -> np.ndarray:
    """Group-level weight with extended-real boundary conventions.

    ``pi_unit == 1`` gives +inf (members rejectable only at p == 0) and
    takes precedence over ``pi_parent == 1``; ``pi_unit == 0`` gives 0;
    otherwise the numerator ``1 - pi_parent`` makes the weight vanish
    when the parent scope is entirely null.
    """
    u = np.asarray(pi_unit, dtype=float)
    p = np.asarray(pi_parent, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = u * (1.0 - p) / (1.0 - u)
    w = np.where(u == 1.0, np.inf, w)
    return np.where(u == 0.0, 0.0, w)


def reciprocal(values) -> np.ndarray:
    """Extended-real reciprocal: 1/0 -> +inf, 1/inf -> 0."""
    v = np.asarray(values, dtype=float)
    with np.errstate(divide="ignore"):
        out = 1.0 / v
    return np.where(np.isinf(v), 0.0, out)


def _scaled_inverse(coef: float, weights: np.ndarray) -> np.ndarray:
    """``coef / weights`` with a zero coefficient killing infinite terms."""
    if coef == 0.0:
        return np.zeros(np.shape(weights))
    return coef * reciprocal(weights)


def _require(layout, kind, variant):
    if not isinstance(layout, kind):
        raise VariantMismatch(
            f"variant {variant.value} needs a {kind.__name__}, got "
            f"{type(layout).__name__}"
        )


def _require_table(props: ProportionTable, layout: Layout):
    if props.layout != layout:
        raise LayoutMismatch("proportion table built for a different layout")


def oneway_oracle_weights(
    props: ProportionTable, layout: Layout
) -> WeightAssignment:
    """One weight per group from its own and the overall null proportion."""
    _require(layout, OneWayLayout, OracleVariant.ONE_WAY)
    _require_table(props, layout)
    w_g = unit_weight(props.per_group, props.pi0)
    return WeightAssignment(layout, layout.expand_groups(w_g))


def twoway_oneper_oracle_weights(
    props: ProportionTable, layout: Layout, variant: OracleVariant
) -> WeightAssignment:
    """Harmonic row/column combination for one-per-cell grids.

    ``TWO_WAY_EQUAL_SPLIT`` weighs both classifications equally;
    ``TWO_WAY_SIZE_ADJUSTED`` tilts the combination by the number of rows
    versus columns (the two agree when m == n).
    """
    if variant not in (
        OracleVariant.TWO_WAY_EQUAL_SPLIT,
        OracleVariant.TWO_WAY_SIZE_ADJUSTED,
    ):
        raise VariantMismatch(f"{variant.value} is not a one-per-cell variant")
    _require(layout, TwoWayOnePerCellLayout, variant)
    _require_table(props, layout)
    w_row = unit_weight(props.per_row, props.pi0)
    w_col = unit_weight(props.per_col, props.pi0)
    m, n = layout.m, layout.n
    if variant is OracleVariant.TWO_WAY_EQUAL_SPLIT:
        inv = 0.5 * reciprocal(w_row)[:, None] + 0.5 * reciprocal(w_col)[None, :]
    else:
        inv = (
            m * reciprocal(w_row)[:, None] + n * reciprocal(w_col)[None, :]
        ) / (m + n)
    return WeightAssignment(layout, reciprocal(inv).ravel())


def twoway_cells_oracle_weights(
    props: ProportionTable, layout: Layout, variant: OracleVariant
) -> WeightAssignment:
    """Cell-level weights for grids with multiple hypotheses per cell.

    ``CELLS_FOUR_TERM`` mixes cell-within-row, cell-within-column, row,
    and column weights with equal 1/4 shares; ``CELLS_TWO_TERM`` uses only
    the row/column pair.  The ``EQUAL_CELLS_*`` variants additionally
    rescale by the grid shape and require a common cell size.
    """
    cells_variants = (
        OracleVariant.CELLS_FOUR_TERM,
        OracleVariant.CELLS_TWO_TERM,
        OracleVariant.EQUAL_CELLS_TWO_TERM,
        OracleVariant.EQUAL_CELLS_FOUR_TERM,
    )
    if variant not in cells_variants:
        raise VariantMismatch(f"{variant.value} is not a multi-cell variant")
    _require(layout, TwoWayCellsLayout, variant)
    _require_table(props, layout)
    m, n = layout.m, layout.n
    if variant in (
        OracleVariant.EQUAL_CELLS_TWO_TERM,
        OracleVariant.EQUAL_CELLS_FOUR_TERM,
    ):
        sizes = layout.sizes_grid()
        if np.unique(sizes).size != 1:
            raise UnequalCells(f"{variant.value} requires equal cell sizes")

    w_row = unit_weight(props.per_row, props.pi0)
    w_col = unit_weight(props.per_col, props.pi0)
    inv_row = reciprocal(w_row)[:, None]
    inv_col = reciprocal(w_col)[None, :]
    if variant is OracleVariant.CELLS_TWO_TERM:
        inv = 0.5 * inv_row + 0.5 * inv_col
    elif variant is OracleVariant.EQUAL_CELLS_TWO_TERM:
        inv = (m * inv_row + n * inv_col) / (m + n)
    else:
        w_cell_row = unit_weight(props.per_cell, props.per_row[:, None])
        w_cell_col = unit_weight(props.per_cell, props.per_col[None, :])
        inv_cr = reciprocal(w_cell_row)
        inv_cc = reciprocal(w_cell_col)
        if variant is OracleVariant.CELLS_FOUR_TERM:
            inv = 0.25 * (inv_cr + inv_cc) + 0.25 * inv_row + 0.25 * inv_col
        else:
            inv = (
                inv_cr
                + inv_cc
                + _scaled_inverse(m - 1, w_row)[:, None]
                + _scaled_inverse(n - 1, w_col)[None, :]
            ) / (m + n)
    return WeightAssignment(layout, layout.expand_cells(reciprocal(inv)))


def oracle_weights(
    props: ProportionTable, layout: Layout, variant: OracleVariant
) -> WeightAssignment:
    """Dispatch to the constructor matching ``variant``."""
    if variant is OracleVariant.ONE_WAY:
        return oneway_oracle_weights(props, layout)
    if variant in (
        OracleVariant.TWO_WAY_EQUAL_SPLIT,
        OracleVariant.TWO_WAY_SIZE_ADJUSTED,
    ):
        return twoway_oneper_oracle_weights(props, layout, variant)
    return twoway_cells_oracle_weights(props, layout, variant)


def verify_weight_identity(w: WeightAssignment, truth: TruthMask) -> float:
    """Signed residual of the calibration condition.

    Returns ``sum over true nulls of 1/w_i`` minus N.  Infinite weights
    contribute zero; a zero weight on a null hypothesis makes the
    residual +inf.
    """
    if w.layout != truth.layout:
        raise LayoutMismatch("weights and truth mask use different layouts")
    inv = reciprocal(w.weights)
    return float(inv[truth.is_null].sum() - w.layout.size)
