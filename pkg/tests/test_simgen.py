"""Generators: determinism, state composition, marginals, and the runner."""

import numpy as np
import pytest
from scipy import stats

from gbh import (
    AdaptiveGBH,
    AdaptiveVariant,
    OneWaySimConfig,
    OutOfRange,
    RejectionSet,
    TwoWaySimConfig,
    expected_pi0,
    fdp,
    gen_oneway,
    gen_twoway,
    power,
    run_replications,
)


class TestConfigValidation:
    def test_probability_ranges(self):
        with pytest.raises(OutOfRange):
            OneWaySimConfig(m=2, n=2, pi_dot=0.0, pi=1.2)
        with pytest.raises(OutOfRange):
            TwoWaySimConfig(m=2, n=2, pi_rc=-0.1)

    def test_correlation_open_upper_bound(self):
        with pytest.raises(OutOfRange):
            OneWaySimConfig(m=2, n=2, pi_dot=0.0, pi=0.5, rho=1.0)
        with pytest.raises(OutOfRange):
            TwoWaySimConfig(m=2, n=2, pi_rc=0.5, rho_p=1.0)

    def test_dimensions(self):
        with pytest.raises(OutOfRange):
            OneWaySimConfig(m=0, n=2, pi_dot=0.0, pi=0.5)

    def test_per_group_rho_length_checked(self):
        with pytest.raises(OutOfRange):
            OneWaySimConfig(m=3, n=2, pi_dot=0.0, pi=0.5, rho=(0.1, 0.2))


class TestDeterminism:
    def test_oneway_same_seed_identical(self):
        cfg = OneWaySimConfig(m=6, n=9, pi_dot=0.3, pi=0.4, rho=0.2)
        p1, t1 = gen_oneway(cfg, 1234)
        p2, t2 = gen_oneway(cfg, 1234)
        np.testing.assert_array_equal(p1.values, p2.values)
        np.testing.assert_array_equal(t1.is_null, t2.is_null)

    def test_twoway_same_seed_identical(self):
        for p in (1, 3):
            cfg = TwoWaySimConfig(
                m=4, n=5, p=p, pi_r=0.2, pi_c=0.3, pi_rc=0.4,
                rho_r=0.3, rho_c=0.2, rho_p=0.1,
            )
            p1, t1 = gen_twoway(cfg, 99)
            p2, t2 = gen_twoway(cfg, 99)
            np.testing.assert_array_equal(p1.values, p2.values)
            np.testing.assert_array_equal(t1.is_null, t2.is_null)

    def test_different_seeds_differ(self):
        cfg = OneWaySimConfig(m=6, n=9, pi_dot=0.3, pi=0.4)
        p1, _ = gen_oneway(cfg, 1)
        p2, _ = gen_oneway(cfg, 2)
        assert not np.array_equal(p1.values, p2.values)

    def test_shared_rho_equals_uniform_per_group_rho(self):
        shared = OneWaySimConfig(m=4, n=6, pi_dot=0.2, pi=0.4, rho=0.3)
        per_group = OneWaySimConfig(m=4, n=6, pi_dot=0.2, pi=0.4, rho=(0.3,) * 4)
        p1, t1 = gen_oneway(shared, 55)
        p2, t2 = gen_oneway(per_group, 55)
        np.testing.assert_array_equal(p1.values, p2.values)
        np.testing.assert_array_equal(t1.is_null, t2.is_null)


class TestStateComposition:
    def test_no_group_sparsity_keeps_every_group_eligible(self):
        # pi_dot = 0 makes every group active, so with pi = 0 everything
        # is a signal
        cfg = OneWaySimConfig(m=5, n=8, pi_dot=0.0, pi=0.0)
        _, truth = gen_oneway(cfg, 7)
        assert truth.n_null == 0

    def test_pi_one_gives_all_null(self):
        cfg = OneWaySimConfig(m=5, n=8, pi_dot=0.0, pi=1.0)
        _, truth = gen_oneway(cfg, 7)
        assert truth.n_null == truth.layout.size

    def test_twoway_all_active(self):
        cfg = TwoWaySimConfig(m=4, n=6, pi_r=0.0, pi_c=0.0, pi_rc=0.0)
        _, truth = gen_twoway(cfg, 3)
        assert truth.n_null == 0

    def test_expected_pi0_oneway(self):
        cfg = OneWaySimConfig(m=2, n=2, pi_dot=0.0, pi=0.5)
        assert expected_pi0(cfg) == pytest.approx(0.5)
        cfg = OneWaySimConfig(m=2, n=2, pi_dot=1.0, pi=0.2)
        assert expected_pi0(cfg) == 1.0

    def test_expected_pi0_twoway(self):
        cfg = TwoWaySimConfig(m=2, n=2, pi_r=0.0, pi_c=0.0, pi_rc=0.3)
        assert expected_pi0(cfg) == pytest.approx(0.3)

    def test_null_fraction_tracks_expectation(self):
        cfg = OneWaySimConfig(m=20, n=25, pi_dot=0.4, pi=0.3)
        reps = 400
        fracs = np.empty(reps)
        for k in range(reps):
            _, truth = gen_oneway(cfg, (5150, k))
            fracs[k] = truth.n_null / truth.layout.size
        se = fracs.std(ddof=1) / np.sqrt(reps)
        assert abs(fracs.mean() - expected_pi0(cfg)) <= 3 * se


class TestMarginals:
    def test_null_pvalues_uniform_independent(self):
        # all-null, independent: pooled p-values pass a goodness-of-fit
        # test at the 1% level
        cfg = OneWaySimConfig(m=50, n=40, pi_dot=0.0, pi=1.0, rho=0.0)
        pool = np.concatenate(
            [gen_oneway(cfg, (42, k))[0].values for k in range(50)]
        )
        assert pool.size == 100_000
        assert stats.kstest(pool, "uniform").pvalue > 0.01

    def test_null_pvalues_mean_half_under_dependence(self):
        # equicorrelated factors keep unit marginal variance, so null
        # p-values stay Uniform(0,1) marginally
        cfg = TwoWaySimConfig(m=10, n=10, pi_rc=1.0, rho_r=0.3, rho_c=0.4)
        reps = 200
        means = np.empty(reps)
        for k in range(reps):
            pv, _ = gen_twoway(cfg, (777, k))
            means[k] = pv.values.mean()
        se = means.std(ddof=1) / np.sqrt(reps)
        assert abs(means.mean() - 0.5) <= 3 * se


def _never_reject(pvals, truth, alpha):
    return RejectionSet(pvals.layout, np.zeros(pvals.size, dtype=bool), 0)


def _reject_all(pvals, truth, alpha):
    return RejectionSet(pvals.layout, np.ones(pvals.size, dtype=bool), pvals.size)


class TestRunReplications:
    def test_never_reject_gives_exact_zero(self):
        cfg = OneWaySimConfig(m=4, n=5, pi_dot=0.0, pi=0.5)
        summary = run_replications(_never_reject, cfg, 50, 0.05, 1)
        assert summary.fdr_hat == 0.0
        assert summary.power_hat == 0.0
        assert summary.se_fdr == 0.0

    def test_reject_all_on_all_null_gives_fdr_one(self):
        cfg = OneWaySimConfig(m=4, n=5, pi_dot=0.0, pi=1.0)
        summary = run_replications(_reject_all, cfg, 50, 0.05, 1)
        assert summary.fdr_hat == 1.0
        assert summary.power_hat == 0.0

    def test_summary_matches_recomputation(self):
        from gbh.simgen import generate
        from gbh.weights_adaptive import run_procedure

        cfg = OneWaySimConfig(m=6, n=10, pi_dot=0.2, pi=0.5)
        proc = AdaptiveGBH(AdaptiveVariant.ONE_WAY, 0.5)
        reps, alpha, seed = 80, 0.05, 31337
        summary = run_replications(proc, cfg, reps, alpha, seed)
        # replications depend only on their child streams, so walking
        # them in reverse order reproduces the same summary means
        fdps, powers = [], []
        for child in reversed(np.random.SeedSequence(seed).spawn(reps)):
            pvals, truth = generate(cfg, child)
            rej = run_procedure(pvals, proc, alpha)
            fdps.append(fdp(rej, truth))
            powers.append(power(rej, truth))
        assert summary.fdr_hat == pytest.approx(np.mean(fdps), abs=1e-15)
        assert summary.power_hat == pytest.approx(np.mean(powers), abs=1e-15)
        assert summary.se_fdr == pytest.approx(
            np.std(fdps, ddof=1) / np.sqrt(reps), rel=1e-12
        )

    def test_deterministic_summary(self):
        cfg = TwoWaySimConfig(m=4, n=4, pi_rc=0.5)
        proc = AdaptiveGBH(AdaptiveVariant.TWO_WAY_EQUAL_SPLIT, 0.5)
        a = run_replications(proc, cfg, 30, 0.05, (9, 9))
        b = run_replications(proc, cfg, 30, 0.05, (9, 9))
        assert (a.fdr_hat, a.se_fdr, a.power_hat, a.se_power) == (
            b.fdr_hat, b.se_fdr, b.power_hat, b.se_power
        )

    def test_reps_validated(self):
        cfg = OneWaySimConfig(m=2, n=2, pi_dot=0.0, pi=0.5)
        with pytest.raises(OutOfRange):
            run_replications(_never_reject, cfg, 0, 0.05, 1)
