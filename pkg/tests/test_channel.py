"""Channel parameter and MGF tests."""

import math

import numpy as np
import pytest

from effcap.channel import (
    ChannelParams,
    SystemParams,
    db_to_linear,
    derived_coeffs,
    make_channel,
    mgf,
)
from effcap.exceptions import DomainError
from effcap.monte_carlo import sample_snr

KAPPAS = [0.0, 1.0, 3.0, 10.0]
MUS = [0.5, 1.0, 2.0, 4.0]
MS = [0.5, 1.0, 2.0, 8.0]
ANTENNAS = [1, 2, 4]


def param_grid():
    for kappa in KAPPAS:
        for mu in MUS:
            for m in MS:
                yield make_channel(kappa, mu, m, -5.0)


class TestMakeChannel:
    def test_db_conversion(self):
        ch = make_channel(3.0, 2.0, 1.0, -5.0)
        assert ch.gamma_bar == pytest.approx(10.0**-0.5, rel=1e-15)
        assert ch.gamma_bar == pytest.approx(0.31623, rel=1e-4)

    def test_zero_db_is_exactly_one(self):
        assert make_channel(0.0, 1.0, 1.0, 0.0).gamma_bar == 1.0

    @pytest.mark.parametrize("kwargs, field", [
        (dict(kappa=-1.0, mu=1.0, m=1.0, gamma_bar_db=0.0), "kappa"),
        (dict(kappa=0.0, mu=0.0, m=1.0, gamma_bar_db=0.0), "mu"),
        (dict(kappa=0.0, mu=1.0, m=-2.0, gamma_bar_db=0.0), "m"),
    ])
    def test_domain_errors_name_the_field(self, kwargs, field):
        with pytest.raises(DomainError, match=field):
            make_channel(**kwargs)

    def test_nonfinite_db_rejected(self):
        with pytest.raises(DomainError):
            make_channel(1.0, 1.0, 1.0, math.inf)


class TestSystemParams:
    def test_validation(self):
        with pytest.raises(DomainError):
            SystemParams(antennas=0, rho=1.0, a_exp=2.0)
        with pytest.raises(DomainError):
            SystemParams(antennas=1, rho=-1.0, a_exp=2.0)
        with pytest.raises(DomainError):
            SystemParams(antennas=1, rho=1.0, a_exp=0.0)

    def test_from_qos_product(self):
        sys = SystemParams.from_qos(antennas=1, rho=1.0, theta=0.1,
                                    block_t=2.0, bandwidth=10.0)
        assert sys.a_exp == pytest.approx(0.1 * 2.0 * 10.0 / math.log(2.0), rel=1e-15)


class TestDerivedCoeffs:
    def test_kappa_zero_forces_unit_shadow_fraction(self):
        a, b = derived_coeffs(ChannelParams(kappa=0.0, mu=1.0, m=5.0, gamma_bar=1.0))
        assert a == 1.0
        assert b == 1.0

    def test_exact_arithmetic_oracle(self):
        ch = make_channel(3.0, 2.0, 1.0, -5.0)
        a, b = derived_coeffs(ch)
        assert a == pytest.approx(2.0 * 4.0 / 10.0**-0.5, rel=1e-14)  # ~25.298
        assert b == pytest.approx(1.0 / 7.0, rel=1e-14)

    def test_heavy_shadowing_limit(self):
        ch = ChannelParams(kappa=1.0, mu=1.0, m=1e9, gamma_bar=1.0)
        assert abs(derived_coeffs(ch).shadow_fraction - 1.0) < 1e-8


class TestMgf:
    def test_normalization_grid(self):
        for ch in param_grid():
            for antennas in ANTENNAS:
                assert abs(mgf(ch, antennas, 0.0) - 1.0) < 1e-12

    def test_strictly_decreasing_in_s(self):
        s_grid = np.linspace(0.0, 50.0, 26)
        for ch in param_grid():
            values = [mgf(ch, 2, s) for s in s_grid]
            assert all(x > y for x, y in zip(values, values[1:]))

    def test_product_law(self):
        for ch in param_grid():
            for antennas in ANTENNAS:
                for s in (0.1, 1.0, 10.0):
                    assert mgf(ch, antennas, s) == pytest.approx(
                        mgf(ch, 1, s) ** antennas, rel=1e-12)

    def test_kappa_zero_reduces_to_nakagami(self):
        for mu in MUS:
            for m in MS:
                ch = make_channel(0.0, mu, m, -5.0)
                for antennas in ANTENNAS:
                    for s in (0.0, 0.5, 2.0, 10.0, 50.0):
                        expected = (1.0 + s * ch.gamma_bar / mu) ** (-mu * antennas)
                        assert mgf(ch, antennas, s) == pytest.approx(expected, rel=1e-12)

    def test_bounded_on_positive_axis(self):
        for ch in param_grid():
            for s in (0.01, 1.0, 25.0):
                assert 0.0 < mgf(ch, 4, s) <= 1.0

    def test_domain(self):
        ch = make_channel(1.0, 1.0, 1.0, 0.0)
        with pytest.raises(DomainError):
            mgf(ch, 1, -0.5)
        with pytest.raises(DomainError):
            mgf(ch, 0, 1.0)

    def test_against_monte_carlo_oracle(self):
        # Empirical mean of exp(-s * gamma_tot) from 1e7 two-antenna draws.
        ch = make_channel(3.0, 1.0, 1.0, -5.0)
        rng = np.random.default_rng(2024)
        n = 10_000_000
        total = sample_snr(ch, rng, n) + sample_snr(ch, rng, n)
        s = 1.0
        samples = np.exp(-s * total)
        mean = float(np.mean(samples))
        se = float(np.std(samples, ddof=1)) / math.sqrt(n)
        assert abs(mgf(ch, 2, s) - mean) < 3.0 * se


def test_db_roundtrip():
    for x in (-5.0, 0.0, 15.0):
        assert db_to_linear(x) == pytest.approx(10.0 ** (x / 10.0), rel=1e-15)
