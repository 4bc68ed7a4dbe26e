"""Channel and link parameters and the SNR moment generating function.

All values are stored in linear scale; dB enters only through the
constructors (x_lin = 10^(x_dB/10)). Parameter sets are immutable after
construction and safe to share across concurrent evaluations.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

from .exceptions import DomainError

LN2 = math.log(2.0)


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


@dataclass(frozen=True)
class ChannelParams:
    """One antenna's kappa-mu shadowed fading description.

    kappa     -- dominant-to-scattered power ratio, >= 0
    mu        -- number of multipath clusters, > 0 (need not be integer)
    m         -- shadowing severity, > 0 (need not be integer)
    gamma_bar -- mean SNR per antenna, linear scale, > 0
    """

    kappa: float
    mu: float
    m: float
    gamma_bar: float

    def __post_init__(self):
        for name in ("kappa", "mu", "m", "gamma_bar"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v}")
        if self.kappa < 0.0:
            raise DomainError(f"kappa must be >= 0, got {self.kappa}")
        if not self.mu > 0.0:
            raise DomainError(f"mu must be > 0, got {self.mu}")
        if not self.m > 0.0:
            raise DomainError(f"m must be > 0, got {self.m}")
        if not self.gamma_bar > 0.0:
            raise DomainError(f"gamma_bar must be > 0, got {self.gamma_bar}")


@dataclass(frozen=True)
class SystemParams:
    """Link-level description: antenna count, transmit SNR, delay exponent.

    The delay-QoS product a_exp combines the delay exponent, block duration
    and bandwidth; it can be built from those via ``from_qos``.
    """

    antennas: int
    rho: float
    a_exp: float

    def __post_init__(self):
        if int(self.antennas) != self.antennas or self.antennas < 1:
            raise DomainError(f"antennas must be an integer >= 1, got {self.antennas}")
        if not (math.isfinite(self.rho) and self.rho >= 0.0):
            raise DomainError(f"rho must be finite and >= 0, got {self.rho}")
        if not (math.isfinite(self.a_exp) and self.a_exp > 0.0):
            raise DomainError(f"a_exp must be finite and > 0, got {self.a_exp}")

    @classmethod
    def from_qos(cls, antennas: int, rho: float, theta: float, block_t: float,
                 bandwidth: float) -> "SystemParams":
        """Build with a_exp = theta * block_t * bandwidth / ln 2."""
        if not (theta > 0.0 and block_t > 0.0 and bandwidth > 0.0):
            raise DomainError("theta, block_t and bandwidth must all be > 0")
        return cls(antennas=antennas, rho=rho,
                   a_exp=theta * block_t * bandwidth / LN2)


class MgfCoeffs(NamedTuple):
    """Derived MGF coefficients of a kappa-mu shadowed SNR.

    snr_scale       -- mu*(1+kappa)/gamma_bar, the MGF pole scale
    shadow_fraction -- m/(mu*kappa+m) in (0, 1], the shadowed-LOS pole
                       compression (1 exactly when kappa = 0)
    """

    snr_scale: float
    shadow_fraction: float


def make_channel(kappa: float, mu: float, m: float, gamma_bar_db: float) -> ChannelParams:
    """Validated channel parameters with the mean SNR given in dB."""
    if not math.isfinite(gamma_bar_db):
        raise DomainError(f"gamma_bar_db must be finite, got {gamma_bar_db}")
    return ChannelParams(kappa=kappa, mu=mu, m=m, gamma_bar=db_to_linear(gamma_bar_db))


def derived_coeffs(ch: ChannelParams) -> MgfCoeffs:
    return MgfCoeffs(
        snr_scale=ch.mu * (1.0 + ch.kappa) / ch.gamma_bar,
        shadow_fraction=ch.m / (ch.mu * ch.kappa + ch.m),
    )


def mgf(ch: ChannelParams, antennas: int, s: float) -> float:
    """E[exp(-s * total SNR)] across ``antennas`` i.i.d. branches, s >= 0.

    Computed as exp(L * [mu ln a + m ln b + (m-mu) ln(s+a) - m ln(s+a*b)])
    so that exponents of order L*m never overflow the linear range.
    """
    if int(antennas) != antennas or antennas < 1:
        raise DomainError(f"antennas must be an integer >= 1, got {antennas}")
    if not (math.isfinite(s) and s >= 0.0):
        raise DomainError(f"mgf requires s >= 0, got {s}")
    a, b = derived_coeffs(ch)
    per_antenna = (ch.mu * math.log(a) + ch.m * math.log(b)
                   + (ch.m - ch.mu) * math.log(s + a) - ch.m * math.log(s + a * b))
    return math.exp(antennas * per_antenna)
