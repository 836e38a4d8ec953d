"""Classical one- and two-sample t statistics and point-form p-values."""

import math
from dataclasses import dataclass, field

import numpy as np

from . import special
from .errors import DataError, DegenerateSampleError, DomainError, InsufficientDataError


@dataclass(frozen=True)
class SampleSummary:
    """Sufficient statistics of one group of observations.

    ``variance`` is the unbiased sample variance (divisor ``n - 1``).
    """

    n: int
    mean: float
    variance: float

    def __post_init__(self):
        if self.n < 2:
            raise InsufficientDataError(f"need at least 2 observations, got n={self.n}")
        if not math.isfinite(self.mean):
            raise DataError(f"sample mean must be finite, got {self.mean!r}")
        if not self.variance > 0 or not math.isfinite(self.variance):
            raise DegenerateSampleError(f"sample variance must be positive and finite, got {self.variance!r}")

    @property
    def nu(self):
        return self.n - 1

    @property
    def sd(self):
        return math.sqrt(self.variance)

    @property
    def effect_size(self):
        """Standardised sample effect ``mean / sd``."""
        return self.mean / self.sd


def effective_n(n1, n2):
    """Harmonic combination ``1 / (1/n1 + 1/n2)`` used as N for two-sample designs."""
    return 1.0 / (1.0 / n1 + 1.0 / n2)


@dataclass(frozen=True)
class TwoSampleSummary:
    group1: SampleSummary
    group2: SampleSummary
    n_eff: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "n_eff", effective_n(self.group1.n, self.group2.n))


@dataclass(frozen=True)
class TStatistic:
    """A t value with its degrees of freedom and the N that enters Bayes factors."""

    t: float
    nu: float
    n_for_bf: float

    def __post_init__(self):
        if not math.isfinite(self.t):
            raise DomainError(f"t must be finite, got {self.t!r}")
        if not self.nu > 0:
            raise DomainError(f"degrees of freedom must be positive, got {self.nu!r}")
        if not self.n_for_bf > 0:
            raise DomainError(f"sample size must be positive, got {self.n_for_bf!r}")

    @property
    def effect_size(self):
        return self.t / math.sqrt(self.n_for_bf)


@dataclass(frozen=True)
class PValue:
    """Two-sided p-value; ``log_p`` stays accurate after ``p`` underflows."""

    p: float
    log_p: float

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0) or self.log_p > 0.0:
            raise DomainError(f"p-value must lie in (0, 1], got {self.p!r}")

    @classmethod
    def from_log(cls, log_p):
        log_p = min(log_p, 0.0)
        return cls(math.exp(log_p), log_p)

    @property
    def log_inv_p(self):
        return -self.log_p


def summarize(observations):
    x = np.asarray(observations, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise InsufficientDataError(f"need at least 2 observations, got {x.size}")
    if not np.all(np.isfinite(x)):
        raise DataError("observations must be finite")
    mean = float(np.mean(x))
    variance = float(np.var(x, ddof=1))
    if variance == 0.0:
        raise DegenerateSampleError("all observations are identical")
    return SampleSummary(int(x.size), mean, variance)


def one_sample_t(s):
    return TStatistic(s.mean / s.sd * math.sqrt(s.n), float(s.n - 1), float(s.n))


def two_sample_t(g1, g2, variant="pooled"):
    """Independent two-sample t.

    ``variant="pooled"`` assumes a common variance (``nu = n1 + n2 - 2``);
    ``"welch"`` uses the Welch-Satterthwaite degrees of freedom.  Either way
    the Bayes-factor sample size is the effective N of the two groups.
    """
    diff = g1.mean - g2.mean
    n_eff = effective_n(g1.n, g2.n)
    if variant == "pooled":
        nu = g1.n + g2.n - 2
        pooled = ((g1.n - 1) * g1.variance + (g2.n - 1) * g2.variance) / nu
        t = diff / math.sqrt(pooled / n_eff)
        return TStatistic(t, float(nu), n_eff)
    if variant == "welch":
        a = g1.variance / g1.n
        b = g2.variance / g2.n
        t = diff / math.sqrt(a + b)
        w = a / (a + b)
        nu = 1.0 / (w * w / (g1.n - 1) + (1.0 - w) * (1.0 - w) / (g2.n - 1))
        return TStatistic(t, nu, n_eff)
    raise DomainError(f"unknown two-sample variant {variant!r}; expected 'pooled' or 'welch'")


def p_value(ts):
    """Two-sided ``p = 2 T_nu(-|t|)``."""
    if ts.t == 0.0:
        return PValue(1.0, 0.0)
    return PValue.from_log(math.log(2.0) + special.t_logcdf(-abs(ts.t), ts.nu))
