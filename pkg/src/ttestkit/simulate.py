"""Seeded Monte-Carlo experiments under point-form and distributional models.

Every experiment draws from its own generator, seeded by
``SeedSequence([seed, *counters])``, so results do not depend on the order
in which experiments are run or on which other experiments share a scan.
"""

import math
import statistics
from dataclasses import dataclass
from typing import Union

import numpy as np

from .bayes import bf_general
from .classical import one_sample_t, p_value, summarize, two_sample_t
from .distributional import DistributionalConfig, bf_distributional, psig_h0
from .equivalence import ExperimentRecord
from .errors import DomainError

GENERATOR_ID = f"numpy-{np.__version__}/PCG64/SeedSequence"


def rng_for(seed, *counters):
    """Independent generator for one experiment, keyed by ``seed`` and integer counters."""
    entropy = [int(seed), *(int(c) for c in counters)]
    if any(e < 0 for e in entropy):
        raise DomainError("seeds and counters must be non-negative integers")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


@dataclass(frozen=True)
class GenerativeModel:
    """``mu ~ N(m, sigma_m^2)``, then ``n`` observations ``X ~ N(mu, sigma^2)``."""

    m: float
    sigma_m: float
    sigma: float
    n: int

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma!r}")
        if not self.sigma_m >= 0:
            raise DomainError(f"sigma_m must be non-negative, got {self.sigma_m!r}")
        if self.n < 2:
            raise DomainError(f"n must be at least 2, got {self.n}")

    @property
    def b(self):
        return (self.sigma_m / self.sigma) ** 2

    def describe(self):
        return f"normal m={self.m!r} sigma_m={self.sigma_m!r} sigma={self.sigma!r} n={self.n}"


@dataclass(frozen=True)
class JZSModel:
    """Two-sample experiments whose standardised effect follows the JZS prior.

    Per experiment ``g ~ Inv-chi^2(1)``, ``delta ~ N(0, g)``; group 1 is
    ``N(delta sigma, sigma^2)`` and group 2 is ``N(0, sigma^2)``.
    """

    n1: int
    n2: int
    sigma: float = 1.0

    def describe(self):
        return f"jzs n1={self.n1} n2={self.n2} sigma={self.sigma!r}"


@dataclass(frozen=True)
class SimCorpus:
    seed: int
    records: tuple
    model: Union[GenerativeModel, JZSModel]
    generator: str = GENERATOR_ID

    def header_lines(self):
        return [f"model: {self.model.describe()}", f"seed: {self.seed}", f"generator: {self.generator}"]


def _draw(model, rng):
    mu = rng.normal(model.m, model.sigma_m) if model.sigma_m > 0 else model.m
    return rng.normal(mu, model.sigma, model.n)


def simulate_experiment(model, seed):
    """Summary statistics of one simulated experiment.

    ``seed`` is an integer or a sequence of integers (seed plus counters).
    """
    keys = (seed,) if isinstance(seed, (int, np.integer)) else tuple(seed)
    return summarize(_draw(model, rng_for(*keys)))


def simulate_corpus(model, count, seed, study_id="sim"):
    """``count`` one-sample experiments from ``model``."""
    records = []
    for i in range(count):
        ts = one_sample_t(simulate_experiment(model, (seed, i)))
        records.append(ExperimentRecord(study_id, f"{i:05d}", ts.t, model.n, 0))
    return SimCorpus(seed, tuple(records), model)


def jzs_corpus(model, count, seed, study_id="jzs"):
    """``count`` two-sample experiments with effects drawn from the JZS prior."""
    records = []
    for i in range(count):
        rng = rng_for(seed, i)
        g = 1.0 / rng.chisquare(1.0)
        delta = rng.normal(0.0, math.sqrt(g))
        a = summarize(rng.normal(delta * model.sigma, model.sigma, model.n1))
        b = summarize(rng.normal(0.0, model.sigma, model.n2))
        ts = two_sample_t(a, b, "pooled")
        records.append(ExperimentRecord(study_id, f"{i:05d}", ts.t, model.n1, model.n2))
    return SimCorpus(seed, tuple(records), model)


def binomial_band(alpha, reps, k=3.0):
    """``alpha +- k`` binomial standard errors for a rate estimated from ``reps`` trials."""
    half = k * math.sqrt(alpha * (1.0 - alpha) / reps)
    return alpha - half, alpha + half


@dataclass(frozen=True)
class Type1Row:
    n: int
    reps: int
    rate: float
    point_rate: float


def type1_scan(model, cfg, alpha, n_grid, reps, seed, matched=True):
    """Rejection rates at level ``alpha`` when the distributional null is true.

    ``rate`` scores each experiment with the distributional significance,
    ``point_rate`` with the classical point-form p-value on the same data.
    ``model.n`` is ignored; each grid entry sets the sample size.
    """
    if model.m != 0:
        raise DomainError("the Type I scan needs data generated under the null (m = 0)")
    if reps < 1000:
        raise DomainError(f"the Type I scan needs reps >= 1000, got {reps}")
    if matched and not math.isclose(cfg.b, model.b, rel_tol=1e-12, abs_tol=0.0):
        raise DomainError(f"matched analysis needs b = sigma_m^2/sigma^2 = {model.b!r}, got {cfg.b!r}")
    rows = []
    for n in n_grid:
        sized = GenerativeModel(model.m, model.sigma_m, model.sigma, int(n))
        hits = point_hits = 0
        for i in range(reps):
            ts = one_sample_t(simulate_experiment(sized, (seed, n, i)))
            hits += psig_h0(ts, cfg).p < alpha
            point_hits += p_value(ts).p < alpha
        rows.append(Type1Row(int(n), reps, hits / reps, point_hits / reps))
    return rows


@dataclass(frozen=True)
class DivergenceRow:
    n: int
    reps: int
    median_log_bf10: float


def bf_divergence_scan(model, prior, n_grid, reps, seed, test="point"):
    """Median log BF10 per sample size for data drawn under a distributional null.

    ``test="point"`` scores with the general Bayesian t-test under ``prior``;
    ``test="distributional"`` with the distributional BF at matched ``b`` and
    ``delta = prior.delta``.
    """
    if model.m != 0 or not model.sigma_m > 0:
        raise DomainError("the divergence scan needs m = 0 and sigma_m > 0")
    if reps < 1:
        raise DomainError("reps must be at least 1")
    if test not in ("point", "distributional"):
        raise DomainError(f"unknown test {test!r}")
    cfg = DistributionalConfig(model.b)
    rows = []
    for n in n_grid:
        sized = GenerativeModel(model.m, model.sigma_m, model.sigma, int(n))
        values = []
        for i in range(reps):
            ts = one_sample_t(simulate_experiment(sized, (seed, n, i)))
            if test == "point":
                values.append(bf_general(ts, prior).log_bf10)
            else:
                values.append(bf_distributional(ts, cfg, prior.delta).log_bf10)
        rows.append(DivergenceRow(int(n), reps, float(statistics.median(values))))
    return rows

