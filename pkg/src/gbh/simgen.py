"""Seeded generators and the Monte-Carlo replication runner.

Hypothesis states are composed from independent Bernoulli draws at each
structural level (group/row/column/cell), so the signal density of the
whole layout factors into per-level densities; ``expected_pi0`` returns
the implied overall null proportion.  Test statistics are standard normal
noise plus a mean shift of ``mu`` on the signals, with equicorrelated
dependence injected through shared normal factors, one per structural
mode; p-values are one-sided upper-tail, ``p = 1 - Phi(x)``.

All randomness flows from ``numpy.random.default_rng`` seeded by the
caller, and replication streams are split off the master seed with
``SeedSequence.spawn``, so results are reproducible and independent of
execution order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .core import (
    OneWayLayout,
    PValueSet,
    TruthMask,
    TwoWayCellsLayout,
    TwoWayOnePerCellLayout,
    fdp,
    null_proportions,
    power,
)
from .errors import OutOfRange
from .weights_adaptive import (
    AdaptiveGBH,
    LslGBH,
    NaiveAdaptiveBH,
    OracleGBH,
    PlainBH,
    TstGBH,
    run_procedure,
)

_SPEC_TYPES = (PlainBH, NaiveAdaptiveBH, OracleGBH, AdaptiveGBH, LslGBH, TstGBH)


def _check_prob(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise OutOfRange(f"{name} must lie in [0, 1], got {value}")
    return value


def _check_corr(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 <= value < 1.0):
        raise OutOfRange(f"{name} must lie in [0, 1), got {value}")
    return value


@dataclass(frozen=True)
class OneWaySimConfig:
    """One-way factor model: m groups of n hypotheses each.

    ``pi_dot`` is the probability that a whole group carries no signal;
    ``pi`` the within-group probability that a member of an active group
    is null.  ``rho`` is the within-group equicorrelation, either one
    value shared by all groups or a per-group sequence of length m.
    """

    m: int
    n: int
    pi_dot: float
    pi: float
    mu: float = 3.0
    rho: float | tuple[float, ...] = 0.0

    def __post_init__(self):
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "n", int(self.n))
        if self.m < 1 or self.n < 1:
            raise OutOfRange("m and n must be >= 1")
        object.__setattr__(self, "pi_dot", _check_prob("pi_dot", self.pi_dot))
        object.__setattr__(self, "pi", _check_prob("pi", self.pi))
        object.__setattr__(self, "mu", float(self.mu))
        if np.ndim(self.rho) == 0:
            object.__setattr__(self, "rho", _check_corr("rho", self.rho))
        else:
            rho = tuple(_check_corr("rho", r) for r in self.rho)
            if len(rho) != self.m:
                raise OutOfRange(f"per-group rho needs {self.m} entries, got {len(rho)}")
            object.__setattr__(self, "rho", rho)

    def group_rho(self) -> np.ndarray:
        return np.broadcast_to(np.asarray(self.rho, dtype=float), (self.m,))

    def layout(self) -> OneWayLayout:
        return OneWayLayout((self.n,) * self.m)


@dataclass(frozen=True)
class TwoWaySimConfig:
    """Two-way model: an m-by-n grid with p hypotheses per cell.

    ``p == 1`` selects the matrix model with row/column shared factors;
    ``p > 1`` the three-mode tensor model with an extra within-cell
    equicorrelation ``rho_p``.  States compose as the product of
    per-hypothesis, per-row, and per-column Bernoulli draws.
    """

    m: int
    n: int
    p: int = 1
    pi_r: float = 0.0
    pi_c: float = 0.0
    pi_rc: float = 0.0
    mu: float = 3.0
    rho_r: float = 0.0
    rho_c: float = 0.0
    rho_p: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "p", int(self.p))
        if self.m < 1 or self.n < 1 or self.p < 1:
            raise OutOfRange("m, n, and p must be >= 1")
        for name in ("pi_r", "pi_c", "pi_rc"):
            object.__setattr__(self, name, _check_prob(name, getattr(self, name)))
        object.__setattr__(self, "mu", float(self.mu))
        for name in ("rho_r", "rho_c", "rho_p"):
            object.__setattr__(self, name, _check_corr(name, getattr(self, name)))

    def layout(self):
        if self.p == 1:
            return TwoWayOnePerCellLayout(self.m, self.n)
        return TwoWayCellsLayout(
            self.m, self.n, ((self.p,) * self.n,) * self.m
        )


@dataclass(frozen=True)
class SimSummary:
    """Monte-Carlo FDR and power estimates at one parameter point."""

    fdr_hat: float
    se_fdr: float
    power_hat: float
    se_power: float
    reps: int
    procedure: str
    config: object
    alpha: float
    seed: object


def gen_oneway(cfg: OneWaySimConfig, seed) -> tuple[PValueSet, TruthMask]:
    """Draw one replication of the one-way factor model."""
    rng = np.random.default_rng(seed)
    m, n = cfg.m, cfg.n
    group_active = rng.random(m) < (1.0 - cfg.pi_dot)
    member_active = rng.random((m, n)) < (1.0 - cfg.pi)
    theta = group_active[:, None] & member_active
    noise = rng.standard_normal((m, n))
    shared = rng.standard_normal(m)
    rho = cfg.group_rho()[:, None]
    x = cfg.mu * theta + np.sqrt(1.0 - rho) * noise + np.sqrt(rho) * shared[:, None]
    pv = ndtr(-x)
    layout = cfg.layout()
    return PValueSet(layout, pv.ravel()), TruthMask(layout, ~theta.ravel())


def gen_twoway(cfg: TwoWaySimConfig, seed) -> tuple[PValueSet, TruthMask]:
    """Draw one replication of the two-way (matrix or tensor) model."""
    rng = np.random.default_rng(seed)
    m, n, p = cfg.m, cfg.n, cfg.p
    rr, rc, rp = cfg.rho_r, cfg.rho_c, cfg.rho_p
    if p == 1:
        states = rng.random((m, n)) < (1.0 - cfg.pi_rc)
        row_active = rng.random(m) < (1.0 - cfg.pi_r)
        col_active = rng.random(n) < (1.0 - cfg.pi_c)
        theta = states & row_active[:, None] & col_active[None, :]
        x = (
            cfg.mu * theta
            + math.sqrt((1 - rr) * (1 - rc)) * rng.standard_normal((m, n))
            + math.sqrt((1 - rr) * rc) * rng.standard_normal(m)[:, None]
            + math.sqrt(rr * (1 - rc)) * rng.standard_normal(n)[None, :]
            + math.sqrt(rr * rc) * rng.standard_normal()
        )
    else:
        states = rng.random((m, n, p)) < (1.0 - cfg.pi_rc)
        row_active = rng.random(m) < (1.0 - cfg.pi_r)
        col_active = rng.random(n) < (1.0 - cfg.pi_c)
        theta = states & row_active[:, None, None] & col_active[None, :, None]
        # One shared standard-normal factor per subset of modes; the factor
        # is indexed by the modes it does NOT share.  Squared coefficients
        # sum to 1, giving unit marginal variance and the equicorrelated
        # product covariance across modes.
        x = (
            cfg.mu * theta
            + math.sqrt((1 - rr) * (1 - rc) * (1 - rp))
            * rng.standard_normal((m, n, p))
            + math.sqrt(rr * (1 - rc) * (1 - rp))
            * rng.standard_normal((n, p))[None, :, :]
            + math.sqrt((1 - rr) * rc * (1 - rp))
            * rng.standard_normal((m, p))[:, None, :]
            + math.sqrt((1 - rr) * (1 - rc) * rp)
            * rng.standard_normal((m, n))[:, :, None]
            + math.sqrt(rr * rc * (1 - rp))
            * rng.standard_normal(p)[None, None, :]
            + math.sqrt(rr * (1 - rc) * rp)
            * rng.standard_normal(n)[None, :, None]
            + math.sqrt((1 - rr) * rc * rp)
            * rng.standard_normal(m)[:, None, None]
            + math.sqrt(rr * rc * rp) * rng.standard_normal()
        )
    pv = ndtr(-x)
    layout = cfg.layout()
    return PValueSet(layout, pv.ravel()), TruthMask(layout, ~theta.ravel())


def expected_pi0(cfg) -> float:
    """Analytic expected overall null proportion of a generator config."""
    if isinstance(cfg, OneWaySimConfig):
        return 1.0 - (1.0 - cfg.pi_dot) * (1.0 - cfg.pi)
    if isinstance(cfg, TwoWaySimConfig):
        return 1.0 - (1.0 - cfg.pi_rc) * (1.0 - cfg.pi_r) * (1.0 - cfg.pi_c)
    raise TypeError(f"unknown simulation config {type(cfg).__name__}")


def generate(cfg, seed) -> tuple[PValueSet, TruthMask]:
    """Dispatch to the generator matching the config type."""
    if isinstance(cfg, OneWaySimConfig):
        return gen_oneway(cfg, seed)
    if isinstance(cfg, TwoWaySimConfig):
        return gen_twoway(cfg, seed)
    raise TypeError(f"unknown simulation config {type(cfg).__name__}")


def _apply_procedure(proc, pvals, truth, alpha):
    if isinstance(proc, OracleGBH) and proc.proportions is None:
        proc = OracleGBH(proc.variant, null_proportions(truth))
    if isinstance(proc, _SPEC_TYPES):
        return run_procedure(pvals, proc, alpha)
    if callable(proc):  # custom: (pvals, truth, alpha) -> RejectionSet
        return proc(pvals, truth, alpha)
    raise TypeError(f"not a procedure: {proc!r}")


def _describe(proc) -> str:
    if isinstance(proc, _SPEC_TYPES):
        return repr(proc)
    return getattr(proc, "__name__", repr(proc))


def run_replications(
    proc, cfg, reps: int, alpha: float, seed
) -> SimSummary:
    """Estimate FDR and power of a procedure over seeded replications.

    ``proc`` is a ProcedureSpec (an ``OracleGBH`` without proportions has
    them filled from each replication's truth mask) or a callable
    ``(pvals, truth, alpha) -> RejectionSet``.  ``seed`` is an int or a
    sequence of ints; each replication runs on its own child stream, so
    the summary is invariant to execution order and two calls with the
    same arguments are identical.
    """
    reps = int(reps)
    if reps < 1:
        raise OutOfRange("reps must be >= 1")
    children = np.random.SeedSequence(seed).spawn(reps)
    fdps = np.empty(reps)
    powers = np.empty(reps)
    for k, child in enumerate(children):
        pvals, truth = generate(cfg, child)
        rej = _apply_procedure(proc, pvals, truth, alpha)
        fdps[k] = fdp(rej, truth)
        powers[k] = power(rej, truth)

    def _se(samples):
        if reps < 2:
            return 0.0
        return float(samples.std(ddof=1) / math.sqrt(reps))

    return SimSummary(
        fdr_hat=float(fdps.mean()),
        se_fdr=_se(fdps),
        power_hat=float(powers.mean()),
        se_power=_se(powers),
        reps=reps,
        procedure=_describe(proc),
        config=cfg,
        alpha=float(alpha),
        seed=seed,
    )
