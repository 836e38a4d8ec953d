"""Significance and Bayes factors against a distributional null.

Under the distributional model the experiment-level mean is itself drawn
from ``N(m, sigma_m^2)``, and ``b = sigma_m^2 / sigma^2`` sets how much
between-experiment spread the null tolerates.  Both hypotheses then share
the same variance for the sample mean, so

    t / sqrt(1 + b N)  ~  T_nu                               (null)
    t / sqrt(1 + b N)  ~  T_nu(delta / sqrt(1/N + b))         (alternative)
"""

import math
from dataclasses import dataclass
from typing import Optional

from . import special
from .bayes import BayesFactor
from .classical import PValue, TStatistic
from .errors import DomainError

_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


@dataclass(frozen=True)
class DistributionalConfig:
    b: float

    def __post_init__(self):
        if not (self.b > 0.0) or math.isinf(self.b):
            raise DomainError(f"b must be positive and finite, got {self.b!r}")


@dataclass(frozen=True)
class DistributionalResult:
    p_sig_h0: PValue
    p_sig_h1: Optional[PValue] = None
    log_bf10: Optional[float] = None


def _scaled_abs_t(ts, cfg):
    return -abs(ts.t) / math.sqrt(1.0 + cfg.b * ts.n_for_bf)


def _noncentrality(ts, cfg, delta):
    return delta / math.sqrt(1.0 / ts.n_for_bf + cfg.b)


def psig_h0(ts, cfg):
    """``2 T_nu(-|t| / sqrt(1 + bN))``."""
    if ts.t == 0.0:
        return PValue(1.0, 0.0)
    return PValue.from_log(math.log(2.0) + special.t_logcdf(_scaled_abs_t(ts, cfg), ts.nu))


def psig_h1(ts, cfg, delta):
    """``2 T_nu(-|t| / sqrt(1 + bN); delta / sqrt(1/N + b))``.

    The doubled lower tail of the noncentral distribution is used as is.  For
    ``delta < 0`` it can exceed one; the result is capped at one.
    """
    theta = _noncentrality(ts, cfg, delta)
    if theta == 0.0:
        return psig_h0(ts, cfg)
    cdf = special.nct_cdf(_scaled_abs_t(ts, cfg), ts.nu, theta).value
    if cdf <= 0.0:
        return PValue(0.0, -math.inf)
    return PValue.from_log(math.log(2.0) + math.log(cdf))


def bf_distributional(ts, cfg, delta):
    """Density ratio of the distributional alternative and null at ``-|t|/sqrt(1+bN)``."""
    x = _scaled_abs_t(ts, cfg)
    theta = _noncentrality(ts, cfg, delta)
    if theta == 0.0:
        return BayesFactor(0.0)
    return BayesFactor(special.nct_logpdf(x, ts.nu, theta) - special.t_logpdf(x, ts.nu))


def bf_distributional_approx(ts, cfg, delta):
    """Normal-approximation form: significance ratio times a Mills-ratio correction.

    With ``d = t / sqrt(N)`` and ``s = sqrt(1/N + b)``::

        BF10 ~ [Phi(-|d - delta|/s) / Phi(-|d|/s)]
               * (sqrt(2b/pi) + |d - delta|) / (sqrt(2b/pi) + |d|)
    """
    n = ts.n_for_bf
    d = ts.t / math.sqrt(n)
    s = math.sqrt(1.0 / n + cfg.b)
    log_ratio = special.norm_logcdf(-abs(d - delta) / s) - special.norm_logcdf(-abs(d) / s)
    anchor = math.sqrt(cfg.b) * _SQRT_2_OVER_PI
    log_mills = math.log(anchor + abs(d - delta)) - math.log(anchor + abs(d))
    return BayesFactor(log_ratio + log_mills)


def distributional_test(ts, cfg, delta=None):
    """Null significance, and when ``delta`` is given the alternative significance and BF."""
    p0 = psig_h0(ts, cfg)
    if delta is None:
        return DistributionalResult(p0)
    return DistributionalResult(p0, psig_h1(ts, cfg, delta), bf_distributional(ts, cfg, delta).log_bf10)
