"""Special-function and quadrature kernels.

Everything in this module is a pure function of its arguments. Factorial-type
quantities are combined in the log domain and sums of positive terms go
through max-shifted exponentiation, so the rate evaluators never see
overflow or underflow from large antenna counts or fading orders.
"""

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.linalg import eigvalsh_tridiagonal

from .exceptions import ConvergenceError, DomainError

# Tolerance knobs, kept together so every consumer shares one policy.
SPECIAL_RTOL = 1e-10      # accuracy target for special-function values
QUAD_SELF_RTOL = 1e-10    # node-doubling self-consistency target
NODE_START = 64           # first Gauss-Laguerre rule size tried
NODE_CAP = 1024           # largest rule size before the adaptive fallback
_QUADPACK_RTOL = 1e-12    # tolerance requested from the adaptive integrator
_QUADPACK_LIMIT = 800     # subdivision limit for the adaptive integrator
_TRICOMI_FAIL_EST = 1e-8  # error estimate beyond which tricomi_u gives up


def log_gamma(x: float) -> float:
    """Natural log of the Gamma function for x > 0."""
    if not x > 0.0 or not math.isfinite(x):
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def pochhammer_log(a: float, j: int) -> float:
    """ln of the rising factorial a(a+1)...(a+j-1)."""
    if not a > 0.0:
        raise DomainError(f"pochhammer_log requires a > 0, got {a}")
    if j < 0 or int(j) != j:
        raise DomainError(f"pochhammer_log requires integer j >= 0, got {j}")
    return math.lgamma(a + j) - math.lgamma(a)


def binom(n: int, j: int):
    """Binomial coefficient C(n, j); exact integer for n <= 60, float beyond."""
    if n < 0 or j < 0 or j > n:
        raise DomainError(f"binom requires 0 <= j <= n, got n={n}, j={j}")
    if n <= 60:
        return math.comb(n, j)
    return math.exp(log_binom(n, j))


def log_binom(n: int, j: int) -> float:
    """ln C(n, j); the form the log-domain sums consume."""
    if n < 0 or j < 0 or j > n:
        raise DomainError(f"log_binom requires 0 <= j <= n, got n={n}, j={j}")
    return math.lgamma(n + 1.0) - math.lgamma(j + 1.0) - math.lgamma(n - j + 1.0)


def log_sum_exp(values) -> float:
    """ln(sum(exp(values))) with max shifting; values may be any array-like."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return -math.inf
    hi = float(np.max(arr))
    if not math.isfinite(hi):
        return hi
    return hi + math.log(float(np.sum(np.exp(arr - hi))))


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and weights for the weight s^alpha * e^(-s) on (0, inf).

    ``log_weights`` is the authoritative representation: for rules beyond a
    couple hundred points the smallest weights fall below the double range,
    while their logs stay finite. ``weights`` is the linear view and may
    underflow to zero in the far tail of very large rules.
    """

    alpha: float
    nodes: np.ndarray
    weights: np.ndarray
    log_weights: np.ndarray

    def __len__(self) -> int:
        return self.nodes.size


def gauss_laguerre(alpha: float, n: int) -> QuadratureRule:
    """n-point generalized Gauss-Laguerre rule, exact to degree 2n-1.

    Nodes come from the symmetric tridiagonal eigenproblem of the recurrence
    coefficients; weights are the reciprocal Christoffel sums evaluated in
    the log domain so large rules stay representable.
    """
    if not alpha > -1.0:
        raise DomainError(f"gauss_laguerre requires alpha > -1, got {alpha}")
    if n < 1 or int(n) != n:
        raise DomainError(f"gauss_laguerre requires integer n >= 1, got {n}")
    n = int(n)
    k = np.arange(n, dtype=float)
    diag = 2.0 * k + alpha + 1.0
    j = np.arange(1, n, dtype=float)
    off = np.sqrt(j * (j + alpha))
    nodes = eigvalsh_tridiagonal(diag, off) if n > 1 else diag.copy()
    log_w = _christoffel_log_weights(nodes, diag, off, alpha)

    if not (nodes[0] > 0.0 and np.all(np.diff(nodes) > 0.0)):
        raise ConvergenceError(
            f"gauss_laguerre nodes degenerate for alpha={alpha}, n={n}",
            best_estimate=math.nan, achieved=math.inf, target=QUAD_SELF_RTOL,
        )
    if not np.all(np.isfinite(log_w)):
        raise ConvergenceError(
            f"gauss_laguerre weights not representable for alpha={alpha}, n={n}",
            best_estimate=math.nan, achieved=math.inf, target=QUAD_SELF_RTOL,
        )
    moment0 = log_sum_exp(log_w)
    rel = abs(math.expm1(moment0 - math.lgamma(alpha + 1.0)))
    if rel > 1e-10:
        raise ConvergenceError(
            f"gauss_laguerre zeroth moment off by {rel:.2e} for alpha={alpha}, n={n}",
            best_estimate=math.exp(moment0), achieved=rel, target=1e-10,
        )
    return QuadratureRule(alpha=alpha, nodes=nodes, weights=np.exp(log_w), log_weights=log_w)


def _christoffel_log_weights(nodes, diag, off, alpha):
    # w_i = 1 / sum_k p_k(x_i)^2 over the orthonormal polynomials p_k.
    # The forward recurrence grows like exp(x/2) at the top nodes, so the
    # iterates are rescaled whenever they get large and the scale is carried
    # separately in log form.
    n = nodes.size
    scale_log = np.full(n, -0.5 * math.lgamma(alpha + 1.0))
    p_prev = np.zeros(n)
    p_cur = np.ones(n)
    total = np.ones(n)
    for k in range(n - 1):
        b_k = off[k]
        b_km1 = off[k - 1] if k > 0 else 0.0
        p_next = ((nodes - diag[k]) * p_cur - b_km1 * p_prev) / b_k
        p_prev, p_cur = p_cur, p_next
        total = total + p_cur**2
        big = np.abs(p_cur) > 1e120
        if np.any(big):
            s = np.where(big, np.abs(p_cur), 1.0)
            p_prev = p_prev / s
            p_cur = p_cur / s
            total = total / s**2
            scale_log = scale_log + np.log(s)
    return -(np.log(total) + 2.0 * scale_log)


@lru_cache(maxsize=128)
def gauss_laguerre_cached(alpha: float, n: int) -> QuadratureRule:
    """Memoized rule constructor; rules are immutable so sharing is safe."""
    return gauss_laguerre(alpha, n)


def tricomi_u(a: float, b: float, z: float) -> float:
    """Tricomi confluent hypergeometric U(a; b; z) for a > 0, z > 0.

    Evaluated from the real integral representation
    U = (1/Gamma(a)) * int_0^inf e^(-z t) t^(a-1) (1+t)^(b-a-1) dt,
    split at t = 1 with the tail rescaled by its exponential decay. The
    integrand is positive, so the result is too; b may be any real, which is
    what the closed-form rate needs (its b arguments go strongly negative).
    """
    value, _ = _tricomi_u_log(a, b, z)
    return math.exp(value)


def tricomi_u_log(a: float, b: float, z: float) -> float:
    """ln U(a; b; z); same contract as tricomi_u."""
    value, _ = _tricomi_u_log(a, b, z)
    return value


def _tricomi_u_log(a: float, b: float, z: float):
    if not (a > 0.0 and math.isfinite(a)):
        raise DomainError(f"tricomi_u requires a > 0, got a={a}")
    if not (z > 0.0 and math.isfinite(z)):
        raise DomainError(f"tricomi_u requires z > 0, got z={z}")
    if not math.isfinite(b):
        raise DomainError(f"tricomi_u requires finite b, got b={b}")
    p = b - a - 1.0

    # Head: t in [0, 1], substituted u = z t so the exponential has unit
    # scale; the algebraic endpoint weight u^(a-1) is handed to QAWS.
    head_val = 0.0
    head_err = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        top = min(z, 1.0)
        val, err = integrate.quad(
            lambda u: math.exp(-u + p * math.log1p(u / z)),
            0.0, top, weight="alg", wvar=(a - 1.0, 0.0),
            epsabs=0.0, epsrel=_QUADPACK_RTOL, limit=_QUADPACK_LIMIT,
        )
        head_val += val
        head_err += err
        if z > 1.0:
            cut = min(z, max(100.0, 4.0 * a))
            val, err = integrate.quad(
                lambda u: math.exp((a - 1.0) * math.log(u) - u + p * math.log1p(u / z)),
                1.0, cut,
                epsabs=0.0, epsrel=_QUADPACK_RTOL, limit=_QUADPACK_LIMIT,
            )
            head_val += val
            head_err += err
        # Tail: t in [1, inf), substituted v = z (t - 1).
        tail_fn = lambda v: math.exp(
            -v + (a - 1.0) * math.log1p(v / z) + p * math.log(2.0 + v / z))
        tail_val, tail_err = integrate.quad(
            tail_fn, 0.0, np.inf,
            epsabs=0.0, epsrel=_QUADPACK_RTOL, limit=_QUADPACK_LIMIT,
        )

    log_head = math.log(head_val) - a * math.log(z) if head_val > 0.0 else -math.inf
    log_tail = (-z - math.log(z) + math.log(tail_val)) if tail_val > 0.0 else -math.inf
    log_total = float(np.logaddexp(log_head, log_tail))
    if not math.isfinite(log_total):
        raise ConvergenceError(
            f"tricomi_u integral vanished for a={a}, b={b}, z={z}",
            best_estimate=0.0, achieved=math.inf, target=SPECIAL_RTOL,
        )
    # Relative error estimate from the integrator, in linear scale.
    total_linear_log = log_total
    est = (head_err * math.exp(-a * math.log(z) - total_linear_log)
           + tail_err * math.exp(-z - math.log(z) - total_linear_log)
           if head_val > 0.0 or tail_val > 0.0 else math.inf)
    if est > _TRICOMI_FAIL_EST:
        raise ConvergenceError(
            f"tricomi_u failed to converge for a={a}, b={b}, z={z}: "
            f"estimated relative error {est:.2e}",
            best_estimate=math.exp(log_total - math.lgamma(a)),
            achieved=est, target=SPECIAL_RTOL,
        )
    return log_total - math.lgamma(a), est


def adaptive_weighted_integral_log(log_f, a_exp: float, rel_tol: float,
                                   scale: float = None):
    """ln of int_0^inf s^(a_exp-1) e^(-s) f(s) ds for f given as ln f, f in (0, 1].

    Backstop for the Gauss-Laguerre ladder: the rate integrand develops a
    branch point at -A*B*L/rho next to the origin at high SNR, where fixed
    rules stall but an adaptive subdivision does not. ``scale`` is the inner
    length scale of f; splitting there keeps each panel's dynamic range small
    so the integrator's error estimate stays meaningful. Returns (log value,
    relative error estimate).
    """
    split = 1.0 if scale is None else min(1.0, max(scale, 1e-200))
    values = []
    errors = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        v, err = integrate.quad(
            lambda s: math.exp(-s + log_f(s)),
            0.0, split, weight="alg", wvar=(a_exp - 1.0, 0.0),
            epsabs=0.0, epsrel=_QUADPACK_RTOL, limit=_QUADPACK_LIMIT,
        )
        values.append(v)
        errors.append(err)
        if split < 1.0:
            v, err = integrate.quad(
                lambda s: math.exp((a_exp - 1.0) * math.log(s) - s + log_f(s)),
                split, 1.0,
                epsabs=0.0, epsrel=_QUADPACK_RTOL, limit=_QUADPACK_LIMIT,
            )
            values.append(v)
            errors.append(err)
        cut = max(100.0, 4.0 * a_exp)
        v, err = integrate.quad(
            lambda s: math.exp((a_exp - 1.0) * math.log(s) - s + log_f(s)),
            1.0, cut,
            epsabs=0.0, epsrel=_QUADPACK_RTOL, limit=_QUADPACK_LIMIT,
        )
        values.append(v)
        errors.append(err)
    total = sum(values)
    if total <= 0.0:
        raise ConvergenceError(
            "adaptive integral evaluated to a non-positive value",
            best_estimate=0.0, achieved=math.inf, target=rel_tol,
        )
    est = sum(errors) / total
    return math.log(total), est
