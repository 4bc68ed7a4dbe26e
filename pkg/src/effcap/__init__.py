"""Effective throughput of MISO links over kappa-mu shadowed fading.

Four mutually validating evaluation routes: Gauss-Laguerre quadrature of
the MGF integral, a Tricomi-U closed form for integer fading orders, a
high-SNR asymptote, and Monte Carlo simulation.
"""

from .channel import (
    ChannelParams,
    MgfCoeffs,
    SystemParams,
    db_to_linear,
    derived_coeffs,
    linear_to_db,
    make_channel,
    mgf,
)
from .exceptions import (
    ConvergenceError,
    DomainError,
    MethodValidityError,
    UnsupportedParametersError,
)
from .monte_carlo import McRate, McSpec, rate_monte_carlo, sample_snr
from .numerics import QuadratureRule, binom, gauss_laguerre, log_gamma, pochhammer_log, tricomi_u
from .rate import (
    Method,
    MethodComparison,
    QuadratureSpec,
    RateResult,
    rate_asymptotic,
    rate_closed_integer,
    rate_dispatch,
    rate_quadrature,
)

__version__ = "0.1.0"

__all__ = [
    "ChannelParams", "MgfCoeffs", "SystemParams", "db_to_linear",
    "derived_coeffs", "linear_to_db", "make_channel", "mgf",
    "ConvergenceError", "DomainError", "MethodValidityError",
    "UnsupportedParametersError",
    "McRate", "McSpec", "rate_monte_carlo", "sample_snr",
    "QuadratureRule", "binom", "gauss_laguerre", "log_gamma",
    "pochhammer_log", "tricomi_u",
    "Method", "MethodComparison", "QuadratureSpec", "RateResult",
    "rate_asymptotic", "rate_closed_integer", "rate_dispatch",
    "rate_quadrature",
]
