"""Weighted Benjamini-Hochberg step-up engine.

``weighted_bh`` orders the weighted p-values ``w_i * P_i`` and rejects the
hypotheses whose weighted p-value is at most the R-th smallest, where R is
the largest j with the j-th smallest weighted p-value <= j * alpha / N.
``plain_bh`` is the unit-weight special case, and ``stepup_reference`` is a
deliberately naive transcription of the same rule kept as a testing oracle.

Weighted products follow extended-real limits: an infinite weight sends any
positive p-value to +inf (never rejected) but leaves an exact zero at zero
(always rejected), and a zero weight sends every p-value to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PValueSet, RejectionSet, WeightAssignment
from .errors import BadAlpha, LayoutMismatch


@dataclass(frozen=True)
class StepUpConfig:
    """Target FDR level for a step-up run."""

    alpha: float = 0.05

    def __post_init__(self):
        a = float(self.alpha)
        if not (0.0 < a < 1.0):
            raise BadAlpha(f"alpha must lie in (0, 1), got {a}")
        object.__setattr__(self, "alpha", a)


def weighted_pvalues(pvalues: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Extended-real products ``w * p`` (inf * 0 resolves to 0)."""
    p = np.asarray(pvalues, dtype=float)
    w = np.asarray(weights, dtype=float)
    with np.errstate(invalid="ignore"):
        out = w * p
    # inf * 0 is the only NaN source here; the limit of w*p as w grows with
    # p == 0 is 0, so the hypothesis stays rejectable.
    return np.where(np.isnan(out), 0.0, out)


def _step_up_count(sorted_values: np.ndarray, constants: np.ndarray) -> int:
    """Largest j (1-based) with sorted_values[j-1] <= constants[j-1], else 0."""
    hits = np.flatnonzero(sorted_values <= constants)
    return 0 if hits.size == 0 else int(hits[-1]) + 1


def weighted_bh(
    p: PValueSet, w: WeightAssignment, cfg: StepUpConfig
) -> RejectionSet:
    """Run the weighted step-up procedure at level ``cfg.alpha``.

    Rejection is by value threshold: every hypothesis whose weighted
    p-value is <= the R-th smallest one is rejected, so boundary ties go
    in or out together.  (With strictly increasing critical constants the
    count of such hypotheses always equals R.)
    """
    if p.layout != w.layout:
        raise LayoutMismatch("p-values and weights use different layouts")
    n = p.size
    wp = weighted_pvalues(p.values, w.weights)
    order = np.argsort(wp, kind="stable")
    constants = cfg.alpha * np.arange(1, n + 1) / n
    r = _step_up_count(wp[order], constants)
    if r == 0:
        rejected = np.zeros(n, dtype=bool)
    else:
        rejected = wp <= wp[order[r - 1]]
    return RejectionSet(p.layout, rejected, r)


def plain_bh(p: PValueSet, cfg: StepUpConfig) -> RejectionSet:
    """The ordinary step-up procedure: all weights equal to one."""
    return weighted_bh(
        p, WeightAssignment(p.layout, np.ones(p.size)), cfg
    )


def stepup_reference(
    p: PValueSet, w: WeightAssignment, cfg: StepUpConfig
) -> RejectionSet:
    """Literal, loop-based transcription of the step-up rule.

    Kept independent of ``weighted_bh`` (plain Python floats, rank-based
    rejection) so the two implementations can check each other.
    """
    if p.layout != w.layout:
        raise LayoutMismatch("p-values and weights use different layouts")
    n = p.size
    products = []
    for pv, wt in zip(p.values.tolist(), w.weights.tolist()):
        if math.isinf(wt):
            products.append(0.0 if pv == 0.0 else math.inf)
        else:
            products.append(wt * pv)
    order = sorted(range(n), key=lambda i: (products[i], i))
    r = 0
    for j in range(n, 0, -1):
        if products[order[j - 1]] <= j * cfg.alpha / n:
            r = j
            break
    rejected = np.zeros(n, dtype=bool)
    for pos in range(r):
        rejected[order[pos]] = True
    return RejectionSet(p.layout, rejected, r)
