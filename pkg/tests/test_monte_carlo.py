"""Monte Carlo sampler and rate estimator tests."""

import math

import numpy as np
import pytest

from effcap.channel import ChannelParams, SystemParams, make_channel, mgf
from effcap.exceptions import DomainError, UnsupportedParametersError
from effcap.monte_carlo import McSpec, rate_monte_carlo, sample_shadow_power, sample_snr
from effcap.rate import rate_quadrature

FIG1_CHANNEL = make_channel(3.0, 1.0, 1.0, -5.0)
FIG1_SYSTEM = SystemParams(antennas=2, rho=10.0**1.5, a_exp=2.0)


class TestMcSpec:
    def test_validation(self):
        with pytest.raises(DomainError):
            McSpec(trials=999)
        with pytest.raises(DomainError):
            McSpec(batch_size=0)
        with pytest.raises(DomainError):
            McSpec(seed=-1)


class TestSampler:
    def test_mean_matches_gamma_bar(self):
        ch = make_channel(3.0, 2.0, 1.5, -5.0)
        rng = np.random.default_rng(11)
        n = 1_000_000
        draws = sample_snr(ch, rng, n)
        se = float(np.std(draws, ddof=1)) / math.sqrt(n)
        assert abs(float(np.mean(draws)) - ch.gamma_bar) < 4.0 * se

    def test_kappa_zero_mu_one_is_exponential(self):
        # Kolmogorov-Smirnov distance against 1 - exp(-x/gamma_bar).
        ch = ChannelParams(kappa=0.0, mu=1.0, m=1.0, gamma_bar=1.0)
        rng = np.random.default_rng(1)
        n = 1_000_000
        x = np.sort(sample_snr(ch, rng, n))
        cdf = 1.0 - np.exp(-x / ch.gamma_bar)
        steps = np.arange(n + 1) / n
        distance = max(float(np.max(np.abs(cdf - steps[1:]))),
                       float(np.max(np.abs(cdf - steps[:-1]))))
        assert distance < 0.002

    @pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
    def test_empirical_mgf_matches_analytic(self, s):
        ch = make_channel(3.0, 2.0, 2.0, -5.0)
        rng = np.random.default_rng(5)
        n = 1_000_000
        samples = np.exp(-s * sample_snr(ch, rng, n))
        mean = float(np.mean(samples))
        se = float(np.std(samples, ddof=1)) / math.sqrt(n)
        assert abs(mgf(ch, 1, s) - mean) < 3.0 * se

    def test_non_integer_mu_rejected(self):
        ch = ChannelParams(kappa=1.0, mu=1.5, m=1.0, gamma_bar=1.0)
        with pytest.raises(UnsupportedParametersError, match="quadrature"):
            sample_snr(ch, np.random.default_rng(0), 10)

    def test_scalar_draw(self):
        value = sample_snr(FIG1_CHANNEL, np.random.default_rng(0))
        assert isinstance(value, float) and value > 0.0

    def test_shadowing_degenerates_for_large_m(self):
        # Var(xi^2) = 1/m, so m = 1e6 pins the shadowing at its unit mean.
        rng = np.random.default_rng(3)
        xi2 = sample_shadow_power(1e6, rng, 100_000)
        assert float(np.var(xi2, ddof=1)) < 2e-6

    def test_antenna_independence(self):
        rng = np.random.default_rng(17)
        n = 100_000
        g1 = sample_snr(FIG1_CHANNEL, rng, n)
        g2 = sample_snr(FIG1_CHANNEL, rng, n)
        cov = float(np.cov(g1, g2)[0, 1])
        se = math.sqrt(float(np.var(g1, ddof=1)) * float(np.var(g2, ddof=1)) / n)
        assert abs(cov) < 4.0 * se


class TestRateMonteCarlo:
    def test_rho_zero_is_exact(self):
        sys0 = SystemParams(antennas=2, rho=0.0, a_exp=2.0)
        est = rate_monte_carlo(FIG1_CHANNEL, sys0, McSpec(trials=10_000, seed=1))
        assert est.rate == 0.0
        assert est.stderr_rate == 0.0
        assert est.mean_expectation == 1.0

    def test_against_quadrature_at_fig1_point(self):
        truth = rate_quadrature(FIG1_CHANNEL, FIG1_SYSTEM).rate
        est = rate_monte_carlo(FIG1_CHANNEL, FIG1_SYSTEM,
                               McSpec(trials=10_000_000, seed=99))
        assert est.stderr_rate > 0.0
        assert abs(est.rate - truth) < 3.0 * est.stderr_rate

    def test_rate_increases_with_antennas(self):
        # rho = 15 dB; separation must exceed 3 standard errors.
        previous = None
        for antennas in (1, 2, 3, 4):
            sys_l = SystemParams(antennas=antennas, rho=10.0**1.5, a_exp=2.0)
            est = rate_monte_carlo(FIG1_CHANNEL, sys_l, McSpec(trials=1_000_000, seed=4))
            if previous is not None:
                gap = est.rate - previous.rate
                assert gap > 3.0 * math.hypot(est.stderr_rate, previous.stderr_rate)
            previous = est

    def test_reproducible_across_runs_and_jobs(self):
        spec = McSpec(trials=300_000, seed=77, batch_size=50_000)
        first = rate_monte_carlo(FIG1_CHANNEL, FIG1_SYSTEM, spec)
        second = rate_monte_carlo(FIG1_CHANNEL, FIG1_SYSTEM, spec)
        threaded = rate_monte_carlo(FIG1_CHANNEL, FIG1_SYSTEM, spec, jobs=4)
        assert first == second == threaded

    def test_batch_layout_does_not_change_semantics(self):
        # Different batch sizes resample, but estimates must agree statistically.
        a = rate_monte_carlo(FIG1_CHANNEL, FIG1_SYSTEM, McSpec(trials=200_000, seed=5, batch_size=200_000))
        b = rate_monte_carlo(FIG1_CHANNEL, FIG1_SYSTEM, McSpec(trials=200_000, seed=6, batch_size=1_000))
        assert abs(a.rate - b.rate) < 4.0 * math.hypot(a.stderr_rate, b.stderr_rate)

    def test_delta_method_calibration(self):
        # Over 100 seeds the 95% interval should cover the true value
        # 90-99 times.
        truth = rate_quadrature(FIG1_CHANNEL, FIG1_SYSTEM).rate
        hits = 0
        for seed in range(100):
            est = rate_monte_carlo(FIG1_CHANNEL, FIG1_SYSTEM,
                                   McSpec(trials=100_000, seed=seed))
            if abs(est.rate - truth) <= 1.96 * est.stderr_rate:
                hits += 1
        assert 90 <= hits <= 99

    def test_non_integer_mu_rejected(self):
        ch = ChannelParams(kappa=1.0, mu=2.5, m=1.0, gamma_bar=1.0)
        with pytest.raises(UnsupportedParametersError):
            rate_monte_carlo(ch, FIG1_SYSTEM, McSpec(trials=1_000, seed=0))
