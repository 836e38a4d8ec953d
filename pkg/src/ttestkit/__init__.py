"""Classical, Bayesian and distributional t-tests built on first-principles special functions."""

__version__ = "0.1.0"

from .bayes import BayesFactor, EffectPrior, bf_default, bf_general, bf_jzs, bf_limit_scan
from .classical import (PValue, SampleSummary, TStatistic, TwoSampleSummary, effective_n, one_sample_t,
                        p_value, summarize, two_sample_t)
from .csvio import parse_records, records_to_text, write_records
from .distributional import (DistributionalConfig, DistributionalResult, bf_distributional,
                             bf_distributional_approx, distributional_test, psig_h0, psig_h1)
from .equivalence import (ApproximationWarning, EquivalenceFit, EquivalenceReport, ExperimentRecord, analyze,
                          approx_log_bf_from_p, fit_line, predicted_c, score_record)
from .errors import (CorpusError, DataError, DegenerateSampleError, DomainError, FitError,
                     InsufficientDataError, NumericalError, TTestKitError)
from .figure import emit_figure
from .simulate import (GenerativeModel, JZSModel, SimCorpus, bf_divergence_scan, binomial_band, jzs_corpus,
                       rng_for, simulate_corpus, simulate_experiment, type1_scan)
from .special import (EvalResult, betainc, mills_asymptotic, mills_exact, mills_modified, nct_cdf, nct_logcdf,
                      nct_logpdf, nct_pdf, t_cdf, t_logcdf, t_logpdf, t_pdf)

__all__ = [name for name in dir() if not name.startswith("_")]
