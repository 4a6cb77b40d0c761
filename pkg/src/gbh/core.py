"""Domain types for classified hypotheses.

Layouts describe how hypotheses are organised (one-way groups, a two-way
grid with one hypothesis per cell, or a two-way grid of multi-member
cells).  The remaining containers bind flat arrays of p-values, truth
indicators, weights, or rejection flags to a layout, and the module-level
functions compute the basic error and performance metrics.

Flat storage is row-major with the innermost index varying fastest:
``(g, i)`` for one-way groups, ``(g, h)`` for one-per-cell grids, and
``(g, h, k)`` for multi-member cells.  All containers are immutable after
construction and all functions are pure, so everything here is safe to
share across threads or processes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import LayoutMismatch, LengthMismatch, OutOfRange


@dataclass(frozen=True)
class OneWayLayout:
    """Hypotheses split into disjoint groups by a single criterion.

    Parameters
    ----------
    group_sizes : tuple of int
        Number of hypotheses in each group; every entry must be >= 1.
    """

    group_sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.group_sizes)
        if len(sizes) == 0:
            raise OutOfRange("a one-way layout needs at least one group")
        if any(s < 1 for s in sizes):
            raise OutOfRange("every group size must be >= 1")
        object.__setattr__(self, "group_sizes", sizes)

    @property
    def n_groups(self) -> int:
        return len(self.group_sizes)

    @property
    def size(self) -> int:
        return sum(self.group_sizes)

    def sizes_array(self) -> np.ndarray:
        return np.asarray(self.group_sizes, dtype=np.int64)

    def offsets(self) -> np.ndarray:
        """Flat index at which each group starts."""
        sizes = self.sizes_array()
        out = np.zeros(self.n_groups, dtype=np.int64)
        np.cumsum(sizes[:-1], out=out[1:])
        return out

    def flat_index(self, g: int, i: int) -> int:
        if not (0 <= g < self.n_groups and 0 <= i < self.group_sizes[g]):
            raise OutOfRange(f"index ({g}, {i}) outside layout")
        return int(self.offsets()[g] + i)

    def structured_index(self, flat: int) -> tuple[int, int]:
        if not (0 <= flat < self.size):
            raise OutOfRange(f"flat index {flat} outside layout")
        offs = self.offsets()
        g = int(np.searchsorted(offs, flat, side="right") - 1)
        return g, int(flat - offs[g])

    def group_labels(self) -> np.ndarray:
        """Group index of every flat position."""
        return np.repeat(np.arange(self.n_groups), self.sizes_array())

    def expand_groups(self, per_group: np.ndarray) -> np.ndarray:
        """Broadcast one value per group to every member hypothesis."""
        return np.repeat(np.asarray(per_group, dtype=float), self.sizes_array())

    def group_sums(self, flat: np.ndarray) -> np.ndarray:
        """Sum a flat array within each group."""
        return np.add.reduceat(np.asarray(flat), self.offsets())


@dataclass(frozen=True)
class TwoWayOnePerCellLayout:
    """An m-by-n grid with exactly one hypothesis at each intersection."""

    m: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "n", int(self.n))
        if self.m < 1 or self.n < 1:
            raise OutOfRange("grid dimensions must be >= 1")

    @property
    def size(self) -> int:
        return self.m * self.n

    def flat_index(self, g: int, h: int) -> int:
        if not (0 <= g < self.m and 0 <= h < self.n):
            raise OutOfRange(f"index ({g}, {h}) outside layout")
        return g * self.n + h

    def structured_index(self, flat: int) -> tuple[int, int]:
        if not (0 <= flat < self.size):
            raise OutOfRange(f"flat index {flat} outside layout")
        return divmod(flat, self.n)

    def as_grid(self, flat: np.ndarray) -> np.ndarray:
        return np.asarray(flat).reshape(self.m, self.n)

    def expand_rows(self, per_row: np.ndarray) -> np.ndarray:
        return np.repeat(np.asarray(per_row, dtype=float), self.n)

    def expand_cols(self, per_col: np.ndarray) -> np.ndarray:
        return np.tile(np.asarray(per_col, dtype=float), self.m)


@dataclass(frozen=True)
class TwoWayCellsLayout:
    """An m-by-n grid whose (g, h) cell holds ``cell_sizes[g][h]`` hypotheses."""

    m: int
    n: int
    cell_sizes: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "n", int(self.n))
        if self.m < 1 or self.n < 1:
            raise OutOfRange("grid dimensions must be >= 1")
        rows = tuple(tuple(int(s) for s in row) for row in self.cell_sizes)
        if len(rows) != self.m or any(len(row) != self.n for row in rows):
            raise LengthMismatch("cell_sizes must be an m-by-n table")
        if any(s < 1 for row in rows for s in row):
            raise OutOfRange("every cell size must be >= 1")
        object.__setattr__(self, "cell_sizes", rows)

    @property
    def size(self) -> int:
        return sum(s for row in self.cell_sizes for s in row)

    def sizes_grid(self) -> np.ndarray:
        return np.asarray(self.cell_sizes, dtype=np.int64)

    def row_sizes(self) -> np.ndarray:
        return self.sizes_grid().sum(axis=1)

    def col_sizes(self) -> np.ndarray:
        return self.sizes_grid().sum(axis=0)

    def cell_offsets(self) -> np.ndarray:
        """Flat index at which each cell starts, cells in row-major order."""
        sizes = self.sizes_grid().ravel()
        out = np.zeros(sizes.size, dtype=np.int64)
        np.cumsum(sizes[:-1], out=out[1:])
        return out

    def flat_index(self, g: int, h: int, k: int) -> int:
        if not (0 <= g < self.m and 0 <= h < self.n):
            raise OutOfRange(f"cell ({g}, {h}) outside layout")
        if not (0 <= k < self.cell_sizes[g][h]):
            raise OutOfRange(f"member {k} outside cell ({g}, {h})")
        return int(self.cell_offsets()[g * self.n + h] + k)

    def structured_index(self, flat: int) -> tuple[int, int, int]:
        if not (0 <= flat < self.size):
            raise OutOfRange(f"flat index {flat} outside layout")
        offs = self.cell_offsets()
        cell = int(np.searchsorted(offs, flat, side="right") - 1)
        g, h = divmod(cell, self.n)
        return g, h, int(flat - offs[cell])

    def expand_cells(self, per_cell: np.ndarray) -> np.ndarray:
        """Broadcast one value per cell to every member hypothesis."""
        values = np.asarray(per_cell, dtype=float).ravel()
        return np.repeat(values, self.sizes_grid().ravel())

    def cell_sums(self, flat: np.ndarray) -> np.ndarray:
        """Sum a flat array within each cell; returns an (m, n) grid."""
        sums = np.add.reduceat(np.asarray(flat), self.cell_offsets())
        return sums.reshape(self.m, self.n)


Layout = Union[OneWayLayout, TwoWayOnePerCellLayout, TwoWayCellsLayout]


def _check_same_layout(a, b):
    if a.layout != b.layout:
        raise LayoutMismatch(f"layouts differ: {a.layout!r} vs {b.layout!r}")


def _flat_float(layout: Layout, values, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float).ravel()
    if arr.size != layout.size:
        raise LengthMismatch(
            f"{what}: expected {layout.size} values, got {arr.size}"
        )
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PValueSet:
    """Validated p-values bound to a layout."""

    layout: Layout
    values: np.ndarray

    def __post_init__(self):
        arr = _flat_float(self.layout, self.values, "p-values")
        bad = ~((arr >= 0.0) & (arr <= 1.0))  # catches NaN as well
        if bad.any():
            idx = int(np.flatnonzero(bad)[0])
            raise OutOfRange(f"p-value at flat index {idx} outside [0, 1]: {arr[idx]}")
        object.__setattr__(self, "values", arr)

    @property
    def size(self) -> int:
        return self.layout.size


def make_pvalue_set(layout: Layout, values) -> PValueSet:
    """Validate ``values`` against ``layout`` and wrap them as a PValueSet."""
    return PValueSet(layout, values)


@dataclass(frozen=True)
class TruthMask:
    """Per-hypothesis null indicator (True = the null hypothesis is true)."""

    layout: Layout
    is_null: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.is_null).ravel()
        if arr.size != self.layout.size:
            raise LengthMismatch(
                f"truth mask: expected {self.layout.size} entries, got {arr.size}"
            )
        arr = arr.astype(bool).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "is_null", arr)

    @property
    def n_null(self) -> int:
        return int(self.is_null.sum())


@dataclass(frozen=True)
class WeightAssignment:
    """Per-hypothesis weights: finite nonnegative reals or +inf."""

    layout: Layout
    weights: np.ndarray

    def __post_init__(self):
        arr = _flat_float(self.layout, self.weights, "weights")
        if np.isnan(arr).any():
            raise OutOfRange("weights must not contain NaN")
        if (arr < 0).any():
            raise OutOfRange("weights must be nonnegative")
        object.__setattr__(self, "weights", arr)


@dataclass(frozen=True)
class RejectionSet:
    """Outcome of a step-up run: rejection flags plus the step-up count."""

    layout: Layout
    rejected: np.ndarray
    threshold_index: int

    def __post_init__(self):
        arr = np.asarray(self.rejected).ravel()
        if arr.size != self.layout.size:
            raise LengthMismatch(
                f"rejections: expected {self.layout.size} entries, got {arr.size}"
            )
        arr = arr.astype(bool).copy()
        arr.setflags(write=False)
        r = int(self.threshold_index)
        if not (0 <= r <= self.layout.size):
            raise OutOfRange(f"threshold index {r} outside [0, N]")
        if int(arr.sum()) != r:
            raise OutOfRange(
                f"rejection count {int(arr.sum())} != threshold index {r}"
            )
        object.__setattr__(self, "rejected", arr)
        object.__setattr__(self, "threshold_index", r)

    @property
    def n_rejected(self) -> int:
        return self.threshold_index


@dataclass(frozen=True)
class ProportionTable:
    """Null proportions for every structural unit of a layout.

    ``null_proportions`` fills every field consistently from a truth mask.
    Tables may also be built directly from externally known proportions;
    in that case ``pi0`` is derived from the finest per-unit data unless
    given explicitly.

    Fields not applicable to the layout kind stay ``None``:

    - one-way: ``per_group``
    - one-per-cell grid: ``per_row``, ``per_col``
    - multi-member cells: ``per_cell``, ``per_row``, ``per_col``
    """

    layout: Layout
    per_group: np.ndarray | None = None
    per_row: np.ndarray | None = None
    per_col: np.ndarray | None = None
    per_cell: np.ndarray | None = None
    pi0: float | None = None

    def __post_init__(self):
        def _clean(name, value, shape):
            if value is None:
                return None
            arr = np.asarray(value, dtype=float)
            if arr.shape != shape:
                raise LengthMismatch(f"{name}: expected shape {shape}, got {arr.shape}")
            if (~((arr >= 0.0) & (arr <= 1.0))).any():
                raise OutOfRange(f"{name}: proportions must lie in [0, 1]")
            arr = arr.copy()
            arr.setflags(write=False)
            return arr

        lay = self.layout
        if isinstance(lay, OneWayLayout):
            per_group = _clean("per_group", self.per_group, (lay.n_groups,))
            if per_group is None:
                raise LengthMismatch("one-way proportion table needs per_group")
            object.__setattr__(self, "per_group", per_group)
            pi0 = self.pi0
            if pi0 is None:
                pi0 = float(per_group @ lay.sizes_array() / lay.size)
        elif isinstance(lay, TwoWayOnePerCellLayout):
            per_row = _clean("per_row", self.per_row, (lay.m,))
            per_col = _clean("per_col", self.per_col, (lay.n,))
            if per_row is None or per_col is None:
                raise LengthMismatch("one-per-cell table needs per_row and per_col")
            object.__setattr__(self, "per_row", per_row)
            object.__setattr__(self, "per_col", per_col)
            pi0 = self.pi0
            if pi0 is None:
                pi0 = float(per_row.mean())
        else:
            per_cell = _clean("per_cell", self.per_cell, (lay.m, lay.n))
            if per_cell is None:
                raise LengthMismatch("multi-member cell table needs per_cell")
            sizes = lay.sizes_grid()
            per_row = self.per_row
            if per_row is None:
                per_row = (per_cell * sizes).sum(axis=1) / lay.row_sizes()
            per_col = self.per_col
            if per_col is None:
                per_col = (per_cell * sizes).sum(axis=0) / lay.col_sizes()
            per_row = _clean("per_row", per_row, (lay.m,))
            per_col = _clean("per_col", per_col, (lay.n,))
            object.__setattr__(self, "per_cell", per_cell)
            object.__setattr__(self, "per_row", per_row)
            object.__setattr__(self, "per_col", per_col)
            pi0 = self.pi0
            if pi0 is None:
                pi0 = float((per_cell * sizes).sum() / lay.size)
        pi0 = float(pi0)
        if not (0.0 <= pi0 <= 1.0):
            raise OutOfRange(f"pi0 must lie in [0, 1], got {pi0}")
        object.__setattr__(self, "pi0", pi0)


def fdp(rej: RejectionSet, truth: TruthMask) -> float:
    """False discovery proportion V / max(R, 1) of one realised outcome."""
    _check_same_layout(rej, truth)
    v = int((rej.rejected & truth.is_null).sum())
    r = rej.n_rejected
    return v / max(r, 1)


def power(rej: RejectionSet, truth: TruthMask) -> float:
    """Proportion of non-null hypotheses rejected; 0 when none exist."""
    _check_same_layout(rej, truth)
    signals = ~truth.is_null
    total = int(signals.sum())
    if total == 0:
        return 0.0
    return int((rej.rejected & signals).sum()) / total


def null_proportions(truth: TruthMask) -> ProportionTable:
    """Exact null proportions for every structural unit of the layout."""
    lay = truth.layout
    nulls = truth.is_null.astype(np.int64)
    if isinstance(lay, OneWayLayout):
        per_group = lay.group_sums(nulls) / lay.sizes_array()
        return ProportionTable(
            lay, per_group=per_group, pi0=truth.n_null / lay.size
        )
    if isinstance(lay, TwoWayOnePerCellLayout):
        grid = lay.as_grid(nulls)
        return ProportionTable(
            lay,
            per_row=grid.mean(axis=1),
            per_col=grid.mean(axis=0),
            pi0=truth.n_null / lay.size,
        )
    cell_nulls = lay.cell_sums(nulls)
    sizes = lay.sizes_grid()
    return ProportionTable(
        lay,
        per_cell=cell_nulls / sizes,
        per_row=cell_nulls.sum(axis=1) / lay.row_sizes(),
        per_col=cell_nulls.sum(axis=0) / lay.col_sizes(),
        pi0=truth.n_null / lay.size,
    )
