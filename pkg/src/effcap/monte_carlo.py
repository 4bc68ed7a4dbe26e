"""Monte Carlo SNR generator and empirical effective-throughput estimator.

The sampler builds a kappa-mu shadowed power variate from first principles:
a Gamma-distributed shadowing factor multiplies the line-of-sight amplitude
of a noncentral sum of 2*mu Gaussian components. Because the sum-of-squares
law depends only on the total noncentrality, all LOS power is placed in a
single in-phase component.

Trials are partitioned into fixed-size batches; every batch derives its own
generator from (seed, batch index), so results are bit-identical no matter
how many workers execute the batches.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import LN2, ChannelParams, SystemParams
from .exceptions import DomainError, UnsupportedParametersError

_SQRT_HALF = math.sqrt(0.5)


@dataclass(frozen=True)
class McSpec:
    """Trial count, seed and stream layout for the Monte Carlo engine."""

    trials: int = 1_000_000
    seed: int = 12345
    batch_size: int = 250_000

    def __post_init__(self):
        if self.trials < 1_000:
            raise DomainError(f"trials must be >= 1000, got {self.trials}")
        if self.batch_size < 1:
            raise DomainError(f"batch_size must be >= 1, got {self.batch_size}")
        if not 0 <= self.seed < 2**64:
            raise DomainError(f"seed must fit in an unsigned 64-bit integer, got {self.seed}")


@dataclass(frozen=True)
class McRate:
    """Empirical effective throughput with a delta-method standard error."""

    rate: float
    stderr_rate: float
    mean_expectation: float
    n_effective: int


def _require_integer_mu(mu: float) -> int:
    if not float(mu).is_integer() or mu < 1:
        raise UnsupportedParametersError(
            f"Monte Carlo sampling needs an integer number of clusters mu >= 1 "
            f"(got mu={mu}); use the quadrature rate path for non-integer mu")
    return int(mu)


def sample_shadow_power(m: float, rng: np.random.Generator, size=None):
    """Squared shadowing amplitude: Gamma(shape m, scale 1/m), unit mean."""
    if not m > 0.0:
        raise DomainError(f"m must be > 0, got {m}")
    return rng.gamma(m, 1.0 / m, size)


def sample_snr(ch: ChannelParams, rng: np.random.Generator, size=None):
    """Instantaneous SNR draw(s) for one antenna; E[gamma] = gamma_bar.

    Scatter components are N(0, 1/2) per dimension; the LOS amplitude
    sqrt(kappa*mu) is attenuated by the Gamma shadowing factor each
    realization. Returns a scalar for size=None, else an ndarray.
    """
    mu = _require_integer_mu(ch.mu)
    n = 1 if size is None else size
    xi = np.sqrt(sample_shadow_power(ch.m, rng, n))
    los = math.sqrt(ch.kappa * mu) * xi
    x1 = rng.normal(0.0, _SQRT_HALF, n)
    w = (x1 + los) ** 2
    # Remaining 2*mu - 1 centered components, each N(0, 1/2).
    w = w + 0.5 * rng.chisquare(2 * mu - 1, n)
    gamma = ch.gamma_bar * w / (mu * (1.0 + ch.kappa))
    if size is None:
        return float(gamma[0])
    return gamma


def _batch_sums(ch, sys, seed, index, count):
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))
    total = np.zeros(count)
    for _ in range(sys.antennas):
        total += sample_snr(ch, rng, count)
    log_f = -sys.a_exp * np.log1p(sys.rho * total / sys.antennas)
    f = np.exp(log_f)
    return float(np.sum(f)), float(np.sum(f * f))


def rate_monte_carlo(ch: ChannelParams, sys: SystemParams, mc: McSpec,
                     jobs: int = 1) -> McRate:
    """Estimate the effective throughput from mc.trials channel draws.

    The per-trial statistic is (1 + rho * gamma_tot / L)^(-A); its sample
    mean M and variance give rate = -log2(M)/A and the delta-method error
    stderr = std(M) / (M * A * ln 2). Fixed seed implies bit-identical
    output for any ``jobs``.
    """
    _require_integer_mu(ch.mu)
    sizes = []
    remaining = mc.trials
    while remaining > 0:
        sizes.append(min(mc.batch_size, remaining))
        remaining -= sizes[-1]

    def run(args):
        index, count = args
        return _batch_sums(ch, sys, mc.seed, index, count)

    tasks = list(enumerate(sizes))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            partials = list(pool.map(run, tasks))
    else:
        partials = [run(t) for t in tasks]

    # Merge in batch order so the reduction is independent of scheduling.
    sum_f = 0.0
    sum_f2 = 0.0
    for s1, s2 in partials:
        sum_f += s1
        sum_f2 += s2

    n = mc.trials
    mean = sum_f / n
    var = max(sum_f2 - n * mean * mean, 0.0) / (n - 1)
    sem = math.sqrt(var / n)
    rate = -math.log2(mean) / sys.a_exp
    stderr = sem / (mean * sys.a_exp * LN2)
    return McRate(rate=rate, stderr_rate=stderr, mean_expectation=mean, n_effective=n)
