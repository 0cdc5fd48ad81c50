"""Closed-form and variational numerics for the triangle-vertex tilted model.

Central objects: the concave rate profile ``lambda_rate``, its stationary
point ``maximizer_a_star``, the two-sided tail expansion
``log_prob_vt_tail``, counting formulas for triangle-factor configurations,
the constrained entropy-like minimization ``variational_min``, the limiting
edge cumulant machinery, and plug-in parameter estimators.

Convention throughout: 0 * log 0 = 0, and bisection residuals are driven to
1e-12 absolute or better.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import DomainError

__all__ = [
    "LinearTilt",
    "PowerLawTilt",
    "RateResult",
    "EdgeRateResult",
    "VariationalSolution",
    "lambda_rate",
    "log_prob_vt_tail",
    "count_pure_triangle_configs",
    "qbasic_config_bound",
    "variational_min",
    "maximizer_a_star",
    "edge_mgf_limit",
    "edge_rate_function",
    "functional_optimum",
    "functional_optimum_grid",
    "estimate_linear",
    "estimate_power_law",
    "log_tilt_weights",
]

LOG6 = math.log(6.0)


@dataclass(frozen=True)
class LinearTilt:
    """Gibbs weight n^(beta * V_T) with beta = 1/3 + theta / log n."""

    theta: float
    lam: float
    n: int

    def __post_init__(self):
        if self.lam <= 0:
            raise DomainError(f"lambda must be positive, got {self.lam}")
        if self.n < 2:
            raise DomainError(f"need n >= 2 to materialize beta, got n={self.n}")

    @property
    def beta(self) -> float:
        return 1.0 / 3.0 + self.theta / math.log(self.n)


@dataclass(frozen=True)
class PowerLawTilt:
    """Gibbs weight exp(n log n * g(V_T/n)) with g(x) = beta_coeff * x^alpha.

    Requires 3 * alpha * beta_coeff < 1 so the tilted fraction has an
    interior optimum; beta_coeff = 0 is accepted as the degenerate untilted
    boundary case.
    """

    alpha: float
    beta_coeff: float
    lam: float

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.beta_coeff < 0:
            raise DomainError(f"beta_coeff must be >= 0, got {self.beta_coeff}")
        if self.lam <= 0:
            raise DomainError(f"lambda must be positive, got {self.lam}")
        if 3 * self.alpha * self.beta_coeff >= 1:
            raise DomainError(
                f"3 * alpha * beta = {3 * self.alpha * self.beta_coeff:g} must be < 1"
            )

    def g(self, x: float) -> float:
        return self.beta_coeff * x**self.alpha


@dataclass(frozen=True)
class RateResult:
    a_star: float
    value: float
    stationarity_residual: float


@dataclass(frozen=True)
class EdgeRateResult:
    numeric: float
    closed_form: float


@dataclass(frozen=True)
class VariationalSolution:
    x1: float
    x2: float
    x3: float
    value: float


def _xlogx(x: float) -> float:
    return 0.0 if x <= 0 else x * math.log(x)


def lambda_rate(a: float, theta: float, lam: float) -> float:
    """Rate profile theta*a - (1-a)log(1-a) - (a/3)log(a/3) - 2a/3 - (a/3)log 6 + a log lam.

    Strictly concave in a on [0, 1]; endpoints use 0*log 0 = 0.
    """
    if lam <= 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    if not 0 <= a <= 1:
        raise DomainError(f"a must lie in [0, 1], got {a}")
    return (
        theta * a
        - _xlogx(1 - a)
        - _xlogx(a / 3.0)
        - (2.0 / 3.0) * a
        - (a / 3.0) * LOG6
        + a * math.log(lam)
    )


def log_prob_vt_tail(n: int, lam: float, a: float) -> float:
    """Leading + second-order expansion of log P(V_T >= a*n) at edge density lam/n.

    The dropped remainder is o(n^{19/20}); at desk scales the value is
    pre-asymptotic and should be compared against exact enumeration.
    """
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    if lam <= 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    if not 0 < a < 1:
        raise DomainError(f"a must lie in (0, 1), got {a}")
    an = a * n
    return (
        -n * _xlogx(1 - a)
        - (an / 3.0) * math.log(an / 3.0)
        - an * (2.0 / 3.0 + LOG6 / 3.0)
        + an * math.log(lam)
    )


def count_pure_triangle_configs(n: int, q: int, as_log: bool = False):
    """Number of ways to arrange q of n labeled vertices into q/3 unordered triangles.

    Exact integer for n <= 20; ``as_log`` switches to a log-gamma evaluation
    for arbitrary sizes.
    """
    if q % 3:
        raise DomainError(f"q must be divisible by 3, got {q}")
    if not 0 <= q <= n:
        raise DomainError(f"need 0 <= q <= n, got q={q}, n={n}")
    if as_log:
        return (
            math.lgamma(n + 1)
            - math.lgamma(n - q + 1)
            - (q / 3) * LOG6
            - math.lgamma(q / 3 + 1)
        )
    if n > 20:
        raise DomainError("exact integer path is limited to n <= 20; use as_log=True")
    num = 1
    for i in range(q):
        num *= n - i
    return num // (6 ** (q // 3) * math.factorial(q // 3))


def _log_binomial(x: float, k: int) -> float:
    """log C(x, k) for real x and integer k >= 0; -inf when fewer than k options."""
    if k < 0:
        raise DomainError(f"k must be >= 0, got {k}")
    if k == 0:
        return 0.0
    if x <= k - 1:
        return -math.inf
    return math.lgamma(x + 1) - math.lgamma(k + 1) - math.lgamma(x - k + 1)


def qbasic_config_bound(
    n: int, q: int, l1: int, l2: int, l31: int, l32: int
) -> float:
    """Log of the upper bound on the number of q-basic subgraphs of K_n
    carrying a given (l1, l2, l31, l32) class-size configuration."""
    if l1 % 3:
        raise DomainError(f"l1 must be divisible by 3, got {l1}")
    if l2 % 2:
        raise DomainError(f"l2 must be divisible by 2, got {l2}")
    if min(l1, l2, l31, l32) < 0:
        raise DomainError("configuration sizes must be nonnegative")
    if l1 + l2 + l31 + l32 != q:
        raise DomainError(
            f"configuration {(l1, l2, l31, l32)} does not sum to q={q}"
        )
    if q > n:
        raise DomainError(f"need q <= n, got q={q}, n={n}")
    l3 = l31 + l32
    out = math.lgamma(n + 1) - math.lgamma(n - q + 1)
    out -= (l1 / 3) * LOG6 + math.lgamma(l1 / 3 + 1)
    out -= (l2 / 2) * math.log(2.0) + math.lgamma(l2 / 2 + 1)
    out -= math.lgamma(l3 + 1)
    if l2 > 0:
        if l1 == 0:
            return -math.inf
        out += (l2 / 2) * math.log(l1)
    out += _log_binomial(l1 * l1 / 2 + l1 * l2, l31)
    out += _log_binomial(float(l1 + l2 + l31), l32)
    return out


def variational_min(
    q: float, c1: float, c2: float, c3: float
) -> VariationalSolution:
    """Minimize (x1/3)log x1 + (x2/2)log x2 + x3 log x3 + c.x over the simplex
    x1 + x2 + x3 = q, xi >= 0.

    The objective is strictly convex, so the interior stationary point found
    by root-finding on the Lagrange multiplier is the global minimum.  The
    multiplier is bracketed by the solutions of exp(3*mu - 3*c1 - 1) = q and
    = q - q^(9/10); if that bracket does not capture the root (q too small),
    an explicit failure is raised.
    """
    if q <= 0:
        raise DomainError(f"q must be positive, got {q}")

    def parts(mu: float) -> tuple[float, float, float]:
        return (
            math.exp(3 * mu - 3 * c1 - 1),
            math.exp(2 * mu - 2 * c2 - 1),
            math.exp(mu - c3 - 1),
        )

    def h(mu: float) -> float:
        return sum(parts(mu)) - q

    shifted = q - q ** (9.0 / 10.0)
    if shifted <= 0:
        raise DomainError(
            f"no bracketing interval for the multiplier: q={q} is too small"
        )
    mu_hi = (1 + 3 * c1 + math.log(q)) / 3.0
    mu_lo = (1 + 3 * c1 + math.log(shifted)) / 3.0
    if h(mu_lo) > 0 or h(mu_hi) < 0:
        raise DomainError(
            "no bracketing interval for the multiplier: "
            f"h({mu_lo:.6g})={h(mu_lo):.6g}, h({mu_hi:.6g})={h(mu_hi):.6g}"
        )
    mu = brentq(h, mu_lo, mu_hi, xtol=1e-14, rtol=8.9e-16, maxiter=200)
    x1, x2, x3 = parts(mu)
    value = (
        _xlogx(x1) / 3.0
        + _xlogx(x2) / 2.0
        + _xlogx(x3)
        + c1 * x1
        + c2 * x2
        + c3 * x3
    )
    return VariationalSolution(x1=x1, x2=x2, x3=x3, value=value)


def _stationarity_parts(a: float, one_minus_a: float, theta: float, lam: float) -> float:
    """Derivative of the rate profile in a; strictly decreasing on (0, 1).

    Takes 1-a separately so callers near either endpoint avoid cancellation.
    """
    return (
        theta
        + math.log(one_minus_a)
        - math.log(a / 3.0) / 3.0
        - LOG6 / 3.0
        + math.log(lam)
    )


def _stationarity(a: float, theta: float, lam: float) -> float:
    return _stationarity_parts(a, 1.0 - a, theta, lam)


def _split_logit(u: float) -> tuple[float, float]:
    """(a, 1-a) for a = 1/(1+exp(-u)), each computed without cancellation."""
    if u >= 0:
        e = math.exp(-u)
        return 1.0 / (1.0 + e), e / (1.0 + e)
    e = math.exp(u)
    return e / (1.0 + e), 1.0 / (1.0 + e)


def maximizer_a_star(theta: float, lam: float) -> RateResult:
    """Unique interior maximizer of the rate profile, by bisection.

    The stationarity function diverges to +inf at 0+ and -inf at 1-, so a
    sign change always exists.  Bisection runs in logit coordinates, where
    the derivative of the stationarity function is bounded in [-1, -1/3];
    that keeps residuals at machine level even when a_star is extreme.
    """
    if lam <= 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    lo, hi = -700.0, 700.0
    for _ in range(160):
        u = 0.5 * (lo + hi)
        a, oma = _split_logit(u)
        if _stationarity_parts(a, oma, theta, lam) > 0:
            lo = u
        else:
            hi = u
    u = 0.5 * (lo + hi)
    a, oma = _split_logit(u)
    return RateResult(
        a_star=a,
        value=lambda_rate(a, theta, lam),
        stationarity_residual=abs(_stationarity_parts(a, oma, theta, lam)),
    )


def edge_mgf_limit(t: float, a: float, lam: float) -> float:
    """Limiting scaled cumulant generating function (lam/2)(e^t - 1) + a*t."""
    if lam <= 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    if not 0 <= a <= 1:
        raise DomainError(f"a must lie in [0, 1], got {a}")
    return 0.5 * lam * math.expm1(t) + a * t


def edge_rate_function(x: float, a: float, lam: float) -> EdgeRateResult:
    """Edge-count rate function at density x, as a numeric Legendre transform
    of the limiting cumulant function, reported next to its closed form
    (x-a)log((x-a)/(lam/2)) - (x-a) + lam/2.

    The additive constant is lam/2, which is what makes the rate vanish at the
    typical density x = a + lam/2; a fixed constant 1 would only do so at
    lam = 2.  Outside the transform domain (x <= a) both entries are +inf.
    """
    if lam <= 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    if x <= a:
        return EdgeRateResult(numeric=math.inf, closed_form=math.inf)
    closed = (x - a) * math.log((x - a) / (lam / 2.0)) - (x - a) + lam / 2.0

    def neg_obj(t: float) -> float:
        return -(t * x - edge_mgf_limit(t, a, lam))

    # bracket the concave maximum by doubling outward from the origin
    lo, hi = -1.0, 1.0
    while neg_obj(lo) <= neg_obj(lo + 1e-3) and lo > -700:
        lo *= 2
    while neg_obj(hi) <= neg_obj(hi - 1e-3) and hi < 700:
        hi *= 2
    res = minimize_scalar(neg_obj, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-13})
    return EdgeRateResult(numeric=-res.fun, closed_form=closed)


def functional_optimum(tilt: PowerLawTilt) -> RateResult:
    """Closed-form optimum of g(a) - a/3 for the power-law tilt."""
    prod = 3 * tilt.alpha * tilt.beta_coeff
    if prod <= 0:
        raise DomainError(
            "degenerate tilt (beta_coeff = 0) has no interior optimum"
        )
    a_star = prod ** (1.0 / (1.0 - tilt.alpha))
    value = tilt.g(a_star) - a_star / 3.0
    residual = abs(
        tilt.alpha * tilt.beta_coeff * a_star ** (tilt.alpha - 1.0) - 1.0 / 3.0
    )
    return RateResult(a_star=a_star, value=value, stationarity_residual=residual)


def functional_optimum_grid(
    g: Callable[[float], float], grid_points: int = 4097
) -> RateResult:
    """Optimum of g(a) - a/3 for arbitrary tabulated g: coarse grid followed
    by golden-section refinement around the best cell."""
    xs = np.linspace(0.0, 1.0, grid_points)
    vals = np.array([g(float(x)) - x / 3.0 for x in xs])
    k = int(np.argmax(vals))
    lo = xs[max(0, k - 1)]
    hi = xs[min(grid_points - 1, k + 1)]
    res = minimize_scalar(
        lambda a: -(g(a) - a / 3.0),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12},
    )
    a_star = float(res.x)
    eps = min(1e-7, a_star / 2, (1 - a_star) / 2) or 1e-12
    deriv = (g(a_star + eps) - g(a_star - eps)) / (2 * eps) - 1.0 / 3.0
    return RateResult(a_star=a_star, value=-float(res.fun),
                      stationarity_residual=abs(deriv))


def estimate_linear(n: int, e: int, v_t: int) -> tuple[float, float]:
    """Plug-in estimators (lambda_hat, theta_hat) from observed edge and
    triangle-vertex counts.

    lambda_hat = 2e/n - 2v_t/n, and theta_hat inverts the stationarity
    condition at a_hat = v_t/n.
    """
    if n < 3:
        raise DomainError(f"need n >= 3, got {n}")
    a_hat = v_t / n
    lam_hat = 2.0 * e / n - 2.0 * a_hat
    if lam_hat <= 0:
        raise DomainError(
            f"lambda_hat = {lam_hat:g} <= 0: observed counts are inconsistent "
            "with the sparse tilted regime"
        )
    if a_hat <= 0 or a_hat >= 1:
        raise DomainError(
            f"a_hat = {a_hat:g} lies on the boundary; theta_hat is undefined"
        )
    theta_hat = (
        -math.log1p(-a_hat)
        + math.log(a_hat / 3.0) / 3.0
        + LOG6 / 3.0
        - math.log(lam_hat)
    )
    return lam_hat, theta_hat


@dataclass(frozen=True)
class PowerLawEstimate:
    beta_hat: float
    lambda_hat: float
    in_regime: bool


def estimate_power_law(n: int, e: int, v_t: int, alpha: float) -> PowerLawEstimate:
    """Invert the power-law optimum at a_hat = v_t/n for known alpha."""
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    a_hat = v_t / n
    if a_hat <= 0 or a_hat >= 1:
        raise DomainError(f"a_hat = {a_hat:g} must lie in (0, 1)")
    beta_hat = a_hat ** (1.0 - alpha) / (3.0 * alpha)
    lam_hat = 2.0 * e / n - 2.0 * a_hat
    return PowerLawEstimate(
        beta_hat=beta_hat,
        lambda_hat=lam_hat,
        in_regime=3 * alpha * beta_hat < 1,
    )


def log_tilt_weights(tilt: LinearTilt | PowerLawTilt | None, n: int) -> np.ndarray:
    """Per-count log Gibbs weights w[q] for q = 0..n triangle vertices."""
    qs = np.arange(n + 1, dtype=np.float64)
    if tilt is None:
        return np.zeros(n + 1)
    if isinstance(tilt, LinearTilt):
        if tilt.n != n:
            raise DomainError(f"tilt was built for n={tilt.n}, not n={n}")
        return qs * (tilt.beta * math.log(n))
    if isinstance(tilt, PowerLawTilt):
        return n * math.log(n) * tilt.beta_coeff * (qs / n) ** tilt.alpha
    raise DomainError(f"unsupported tilt type {type(tilt).__name__}")
