"""Bayes factors for the one-sample t-test family, all kept in log space.

The general test compares ``t ~ T_nu`` under the null with

    t / sqrt(1 + sigma_delta^2 N)  ~  T_nu(delta / sqrt(1/N + sigma_delta^2))

under the alternative.  Default tests fix ``delta = 0``; the JZS test also
integrates ``sigma_delta^2`` over an inverse chi-square(1) prior.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import special
from .classical import TStatistic
from .errors import DomainError, NumericalError

JZS_LOG_G_RANGE = (-30.0, 30.0)
JZS_REL_TOL = 1e-6


@dataclass(frozen=True)
class EffectPrior:
    """Alternative-hypothesis effect size: mean ``delta``, spread ``sigma_delta``."""

    delta: float
    sigma_delta: float

    def __post_init__(self):
        if not math.isfinite(self.delta):
            raise DomainError(f"delta must be finite, got {self.delta!r}")
        if not (self.sigma_delta >= 0.0) or math.isinf(self.sigma_delta):
            raise DomainError(f"sigma_delta must be finite and >= 0, got {self.sigma_delta!r}")
        if self.sigma_delta == 0.0 and self.delta == 0.0:
            raise DomainError("delta = 0 with sigma_delta = 0 makes the alternative identical to the null")


@dataclass(frozen=True)
class BayesFactor:
    """Natural-log ``BF10``; ``abs_error_bound`` applies to ``log_bf10`` (i.e. relative on ``BF10``)."""

    log_bf10: float
    abs_error_bound: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.log_bf10):
            raise NumericalError("log Bayes factor is not finite", self.log_bf10)

    @property
    def bf10(self):
        """``BF10`` on the natural scale; overflows to ``inf`` for huge evidence."""
        try:
            return math.exp(self.log_bf10)
        except OverflowError:
            return math.inf


def _log_bf(t, nu, n, delta, sigma_delta_sq):
    spread = 1.0 + sigma_delta_sq * n
    scaled_t = t / math.sqrt(spread)
    theta = delta / math.sqrt(1.0 / n + sigma_delta_sq)
    return special.nct_logpdf(scaled_t, nu, theta) - 0.5 * math.log(spread) - special.t_logpdf(t, nu)


def bf_general(ts, prior):
    """Bayes factor of the general (Gonen-style) t-test with fixed ``delta``, ``sigma_delta``."""
    return BayesFactor(_log_bf(ts.t, ts.nu, ts.n_for_bf, prior.delta, prior.sigma_delta ** 2))


def bf_default(ts, sigma_delta):
    if not sigma_delta > 0:
        raise DomainError(f"default test needs sigma_delta > 0, got {sigma_delta!r}")
    return bf_general(ts, EffectPrior(0.0, sigma_delta))


def _default_log_bf(t, nu, n, g):
    spread = 1.0 + g * n
    return special.t_logpdf(t / math.sqrt(spread), nu) - 0.5 * math.log(spread) - special.t_logpdf(t, nu)


def _log_prior_log_g(u):
    # inverse chi-square(1) density of g = exp(u), times the Jacobian dg/du = g
    return -0.5 * math.log(2.0 * math.pi) - 0.5 * u - 0.5 * math.exp(-u)


def bf_jzs(ts):
    """JZS Bayes factor: the default test averaged over ``sigma_delta^2 ~ Inv-chi^2(1)``.

    The average is taken over ``u = log sigma_delta^2`` on a fixed window.
    Mass outside the window is bounded analytically and included in the
    reported error, which must stay below ``JZS_REL_TOL`` relative.
    """
    t, nu, n = ts.t, ts.nu, ts.n_for_bf
    lo, hi = JZS_LOG_G_RANGE

    def log_integrand(u):
        return _log_prior_log_g(u) + _default_log_bf(t, nu, n, math.exp(u))

    grid = np.linspace(lo, hi, 241).tolist()
    values = [log_integrand(u) for u in grid]
    i_peak = int(np.argmax(values))
    peak = values[i_peak]

    def integrand(u):
        return math.exp(log_integrand(u) - peak)

    mass, quad_err = integrate.quad(integrand, lo, hi, points=[grid[i_peak]],
                                    epsabs=0.0, epsrel=1e-10, limit=400)
    if not mass > 0.0:
        raise NumericalError("JZS integral returned a non-positive mass", mass, quad_err)

    # g > e^hi: the default BF is at most f(0)/(f(t) sqrt(1 + g N)); prior mass is P(chi2_1 < e^-hi)
    log_upper_bf = special.t_logpdf(0.0, nu) - special.t_logpdf(t, nu) - 0.5 * math.log1p(math.exp(hi) * n)
    upper_mass = math.erf(math.sqrt(0.5 * math.exp(-hi)))
    # g < e^lo: the default BF is at most max(1, f(0)/f(t)); prior mass is P(chi2_1 > e^-lo)
    log_lower_bf = max(0.0, special.t_logpdf(0.0, nu) - special.t_logpdf(t, nu))
    lower_mass = math.erfc(math.sqrt(0.5 * math.exp(-lo)))
    tail = (upper_mass * math.exp(min(log_upper_bf - peak, 700.0))
            + lower_mass * math.exp(min(log_lower_bf - peak, 700.0)))
    rel_err = (quad_err + tail) / mass
    log_bf = peak + math.log(mass)
    if rel_err > JZS_REL_TOL:
        raise NumericalError("JZS quadrature missed its relative error target", log_bf, rel_err)
    return BayesFactor(log_bf, rel_err)


def bf_limit_scan(d, prior, n_grid):
    """Bayes factors for a fixed sample effect ``d`` at each sample size in ``n_grid``.

    Each entry uses ``t = d sqrt(N)`` and ``nu = N - 1``.
    """
    if d == 0:
        raise DomainError("the large-sample scan needs a nonzero sample effect d")
    grid = [int(n) for n in n_grid]
    if not grid:
        raise DomainError("n_grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("n_grid must be strictly increasing")
    if grid[0] < 2:
        raise DomainError("sample sizes must be at least 2")
    return [bf_general(TStatistic(d * math.sqrt(n), float(n - 1), float(n)), prior) for n in grid]
