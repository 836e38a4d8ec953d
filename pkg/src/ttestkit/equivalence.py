"""Relating log Bayes factors to log(1/p) across a corpus of experiments.

For a default test with large ``nu`` the Mills-ratio tail approximation gives

    log BF10  ~  log(1/p) - log|t| - log sqrt(pi (1 + sigma_delta^2 N) / 2)

so over experiments of similar size ``log BF10 ~ log(1/p) + C`` with ``C``
the corpus mean of the last two terms.  Natural logs throughout.
"""

import logging
import math
import warnings
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .bayes import bf_jzs
from .classical import PValue, TStatistic, effective_n, p_value
from .errors import DataError, DomainError, FitError

log = logging.getLogger(__name__)

ACCURATE_ABS_T = 3.0


class ApproximationWarning(UserWarning):
    """The tail approximation is being used where it is known to be loose."""


@dataclass(frozen=True)
class ExperimentRecord:
    """One experiment reduced to its t statistic and group sizes.

    ``n2 == 0`` marks a one-sample experiment.  ``log_p`` and ``log_bf10`` are
    filled in by :func:`score_record`.
    """

    study_id: str
    site_id: str
    t: float
    n1: int
    n2: int = 0
    log_p: Optional[float] = None
    log_bf10: Optional[float] = None

    def __post_init__(self):
        if not math.isfinite(self.t):
            raise DataError(f"t must be finite, got {self.t!r}")
        if self.n1 < 2:
            raise DataError(f"n1 must be at least 2, got {self.n1}")
        if self.n2 != 0 and self.n2 < 2:
            raise DataError(f"n2 must be 0 (one-sample) or at least 2, got {self.n2}")

    @property
    def one_sample(self):
        return self.n2 == 0

    @property
    def nu(self):
        return float(self.n1 - 1) if self.one_sample else float(self.n1 + self.n2 - 2)

    @property
    def n_eff(self):
        return float(self.n1) if self.one_sample else effective_n(self.n1, self.n2)

    @property
    def p(self):
        return None if self.log_p is None else math.exp(self.log_p)

    @property
    def log_inv_p(self):
        return None if self.log_p is None else -self.log_p

    def t_statistic(self):
        return TStatistic(self.t, self.nu, self.n_eff)

    def summary_fields(self):
        """The defining fields, without derived values."""
        return (self.study_id, self.site_id, self.t, self.n1, self.n2)


@dataclass(frozen=True)
class EquivalenceFit:
    slope: float
    intercept: float
    intercept_stderr: float
    r_squared: float
    n_points: int
    c_predicted: Optional[float] = None


def score_record(r):
    """Attach the point-form p-value and the JZS Bayes factor."""
    ts = r.t_statistic()
    return replace(r, log_p=p_value(ts).log_p, log_bf10=bf_jzs(ts).log_bf10)


def predicted_c(records, sigma_delta_sq_effective=1.0):
    """Mean of ``-log(|t| sqrt(pi (1 + s N_eff) / 2))`` over the records."""
    records = list(records)
    if not records:
        raise DomainError("predicted C needs at least one record")
    if not sigma_delta_sq_effective > 0:
        raise DomainError("the effective sigma_delta^2 must be positive")
    terms = []
    for r in records:
        if r.t == 0.0:
            raise DomainError(f"record {r.study_id}/{r.site_id} has t = 0; log|t| is undefined")
        terms.append(-(math.log(abs(r.t)) + 0.5 * math.log(math.pi * (1.0 + sigma_delta_sq_effective * r.n_eff) / 2.0)))
    return math.fsum(terms) / len(terms)


def make_point(r):
    """``(log(1/p), log BF10)`` for a scored record."""
    if r.log_p is None or r.log_bf10 is None:
        raise DataError(f"record {r.study_id}/{r.site_id} has not been scored")
    return (-r.log_p, r.log_bf10)


def fit_line(points):
    """Ordinary least squares of y on x.

    Returns slope, intercept, the standard error of the intercept and R^2.
    """
    pts = np.asarray(list(points), dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 3 or pts.shape[1] != 2:
        raise FitError("a line fit needs at least 3 (x, y) points")
    x, y = pts[:, 0], pts[:, 1]
    n = x.size
    x_bar = x.mean()
    y_bar = y.mean()
    dx = x - x_bar
    sxx = float(dx @ dx)
    if sxx == 0.0 or not math.isfinite(sxx):
        raise FitError("all x values are equal; the slope is undefined")
    slope = float(dx @ (y - y_bar)) / sxx
    intercept = float(y_bar - slope * x_bar)
    resid = y - (intercept + slope * x)
    sse = float(resid @ resid)
    dy = y - y_bar
    syy = float(dy @ dy)
    r_squared = 1.0 if syy == 0.0 else min(max(1.0 - sse / syy, 0.0), 1.0)
    s2 = sse / (n - 2)
    intercept_stderr = math.sqrt(s2 * (1.0 / n + x_bar * x_bar / sxx))
    return EquivalenceFit(slope, intercept, intercept_stderr, r_squared, int(n))


def approx_log_bf_from_p(p, t, n, sigma_delta):
    """Tail approximation ``log(1/p) - log|t| - log sqrt(pi (1 + sigma_delta^2 n) / 2)``.

    ``p`` may be a :class:`PValue` (its ``log_p`` is used) or a float.  Warns
    with :class:`ApproximationWarning` when ``|t| < 3``.
    """
    log_p = p.log_p if isinstance(p, PValue) else math.log(p)
    if t == 0:
        raise DomainError("the approximation needs t != 0")
    if abs(t) < ACCURATE_ABS_T:
        warnings.warn(f"|t| = {abs(t):.3g} < {ACCURATE_ABS_T:g}: the 1/|x| Mills approximation is loose here",
                      ApproximationWarning, stacklevel=2)
    return -log_p - math.log(abs(t)) - 0.5 * math.log(math.pi * (1.0 + sigma_delta * sigma_delta * n) / 2.0)


@dataclass(frozen=True)
class EquivalenceReport:
    records: tuple
    points: tuple
    fit: EquivalenceFit
    excluded: tuple = ()


def analyze(records, sigma_delta_sq_effective=1.0):
    """Score every record, compute C and fit the log BF vs log(1/p) line.

    Records with ``t == 0`` are dropped from C and from the fit, with a
    logged warning, rather than failing the corpus.
    """
    kept, excluded = [], []
    for r in records:
        if r.t == 0.0:
            log.warning("excluding %s/%s: t = 0", r.study_id, r.site_id)
            excluded.append(r)
        else:
            kept.append(r)
    scored = [score_record(r) for r in kept]
    points = [make_point(r) for r in scored]
    fit = replace(fit_line(points), c_predicted=predicted_c(scored, sigma_delta_sq_effective))
    return EquivalenceReport(tuple(scored), tuple(points), fit, tuple(excluded))
