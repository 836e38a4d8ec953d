"""Command-line entry point.

Each subcommand prints one JSON document on stdout, or writes it to
``--output`` where that option exists.  Numbers are rounded to
10 significant digits from the library values; non-finite values print as
``null``.  Exit status is 0 on success, 2 for bad input or parameters and 3
when a numerical routine cannot meet its tolerance.
"""

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .bayes import EffectPrior, bf_default, bf_general, bf_jzs
from .classical import SampleSummary, one_sample_t, p_value
from .csvio import parse_records, records_to_text
from .distributional import DistributionalConfig, distributional_test
from .equivalence import ExperimentRecord, analyze
from .errors import DataError, DomainError, FitError, NumericalError
from .figure import emit_figure
from .simulate import (GenerativeModel, JZSModel, bf_divergence_scan, binomial_band, jzs_corpus,
                       simulate_corpus, type1_scan)

EXIT_OK = 0
EXIT_DATA = 2
EXIT_NUMERICAL = 3


def _sig(x):
    if x is None:
        return None
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.10g}")


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (int, float)):
        return _sig(obj)
    return obj


def _dump(obj):
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def _read_input(path):
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _inline_record(args):
    if args.t is not None:
        if args.n1 is None:
            raise DomainError("--t needs --n1 (and --n2 for two-sample designs)")
        return ExperimentRecord("cli", "-", args.t, args.n1, args.n2 or 0)
    given = [v is not None for v in (args.n, args.mean, args.var)]
    if all(given):
        ts = one_sample_t(SampleSummary(args.n, args.mean, args.var))
        return ExperimentRecord("cli", "-", ts.t, args.n, 0)
    if any(given):
        raise DomainError("a one-sample record needs all of --n, --mean and --var")
    return None


def _records(args):
    inline = _inline_record(args)
    if args.input is not None and inline is not None:
        raise DomainError("give either an input CSV or an inline record, not both")
    if args.input is not None:
        return parse_records(_read_input(args.input))
    if inline is None:
        raise DomainError("no input: pass a CSV path or an inline record")
    return [inline]


def _base_fields(r):
    ts = r.t_statistic()
    pv = p_value(ts)
    return {"study": r.study_id, "site": r.site_id, "t": r.t, "nu": ts.nu, "n_eff": ts.n_for_bf,
            "p": pv.p, "log_p": pv.log_p}


def _bf_fields(bf):
    return {"log_bf10": bf.log_bf10, "bf10": bf.bf10, "log_bf10_error_bound": bf.abs_error_bound}


def cmd_ttest(args):
    return {"command": "ttest", "results": [_base_fields(r) for r in _records(args)]}


def cmd_bf(args):
    if args.informed:
        if args.delta is None or args.sigma_delta is None:
            raise DomainError("--informed needs --delta and --sigma-delta")
        prior = EffectPrior(args.delta, args.sigma_delta)
        score, kind = (lambda ts: bf_general(ts, prior)), "informed"
        params = {"delta": args.delta, "sigma_delta": args.sigma_delta}
    elif args.default:
        if args.sigma_delta is None:
            raise DomainError("--default needs --sigma-delta")
        score, kind = (lambda ts: bf_default(ts, args.sigma_delta)), "default"
        params = {"sigma_delta": args.sigma_delta}
    else:
        score, kind, params = bf_jzs, "jzs", {}
    results = []
    for r in _records(args):
        row = _base_fields(r)
        row.update(_bf_fields(score(r.t_statistic())))
        results.append(row)
    return {"command": "bf", "prior": kind, **params, "results": results}


def cmd_dist(args):
    cfg = DistributionalConfig(args.b)
    results = []
    for r in _records(args):
        res = distributional_test(r.t_statistic(), cfg, args.delta)
        row = _base_fields(r)
        row["p_sig_h0"] = res.p_sig_h0.p
        row["log_p_sig_h0"] = res.p_sig_h0.log_p
        if res.p_sig_h1 is not None:
            row["p_sig_h1"] = res.p_sig_h1.p
            row["log_bf10"] = res.log_bf10
            row["bf10"] = math.exp(res.log_bf10) if res.log_bf10 < 709.0 else math.inf
        results.append(row)
    return {"command": "dist", "b": args.b, "delta": args.delta, "results": results}


def cmd_equiv(args):
    records = parse_records(_read_input(args.input))
    report = analyze(records, args.sigma_delta_sq)
    fit = report.fit
    out = {
        "command": "equiv",
        "sigma_delta_sq_effective": args.sigma_delta_sq,
        "n_records": len(records),
        "n_excluded": len(report.excluded),
        "fit": {"slope": fit.slope, "intercept": fit.intercept, "intercept_stderr": fit.intercept_stderr,
                "r_squared": fit.r_squared, "n_points": fit.n_points, "c_predicted": fit.c_predicted},
        "results": [{**_base_fields(r), "log_inv_p": r.log_inv_p, "log_bf10": r.log_bf10}
                    for r in report.records],
    }
    if args.figure:
        svg, pts = emit_figure(report.points, fit, args.figure)
        out["figure"] = str(svg)
        out["points"] = str(pts)
    return out


def _grid(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise DomainError(f"--n-grid must be comma-separated integers, got {text!r}") from None
    if not values:
        raise DomainError("--n-grid is empty")
    return values


def _normal_model(args):
    return GenerativeModel(args.m, args.sigma_m, args.sigma, args.n)


def cmd_simulate(args):
    if args.scan == "type1":
        if args.b is None:
            raise DomainError("--scan type1 needs --b")
        model = _normal_model(args)
        rows = type1_scan(model, DistributionalConfig(args.b), args.alpha, _grid(args.n_grid), args.reps,
                          args.seed, matched=not args.mismatched)
        lo, hi = binomial_band(args.alpha, args.reps)
        return {"command": "simulate", "scan": "type1", "model": model.describe(), "seed": args.seed,
                "alpha": args.alpha, "b": args.b, "band": [lo, hi],
                "rows": [{"n": r.n, "reps": r.reps, "rate": r.rate, "point_rate": r.point_rate} for r in rows]}
    if args.scan == "divergence":
        if args.delta is None or args.sigma_delta is None:
            raise DomainError("--scan divergence needs --delta and --sigma-delta")
        model = _normal_model(args)
        rows = bf_divergence_scan(model, EffectPrior(args.delta, args.sigma_delta), _grid(args.n_grid),
                                  args.reps, args.seed, args.test)
        return {"command": "simulate", "scan": "divergence", "test": args.test, "model": model.describe(),
                "seed": args.seed,
                "rows": [{"n": r.n, "reps": r.reps, "median_log_bf10": r.median_log_bf10} for r in rows]}

    if args.count < 1:
        raise DomainError("--count must be at least 1")
    if args.model == "jzs":
        corpus = jzs_corpus(JZSModel(args.n1, args.n2, args.sigma), args.count, args.seed)
    else:
        corpus = simulate_corpus(_normal_model(args), args.count, args.seed)
    text = records_to_text(corpus.records, corpus.header_lines())
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8", newline="\n")
        return {"command": "simulate", "model": corpus.model.describe(), "seed": args.seed,
                "count": len(corpus.records), "output": args.output}
    sys.stdout.write(text)
    return None


def _add_inline(p):
    p.add_argument("input", nargs="?", help="CSV corpus path, or - for stdin")
    g = p.add_argument_group("inline record")
    g.add_argument("--n", type=int, help="one-sample size")
    g.add_argument("--mean", type=float, help="one-sample mean")
    g.add_argument("--var", type=float, help="one-sample variance (n - 1 denominator)")
    g.add_argument("--t", type=float, help="t statistic")
    g.add_argument("--n1", type=int, help="group 1 size (with --t)")
    g.add_argument("--n2", type=int, help="group 2 size, 0 or omitted for one-sample")


def build_parser():
    parser = argparse.ArgumentParser(prog="ttestkit", description="Classical, Bayesian and distributional t-tests.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ttest", help="t, degrees of freedom and two-sided p-value")
    _add_inline(p)
    p.set_defaults(func=cmd_ttest)

    p = sub.add_parser("bf", help="Bayes factor BF10")
    _add_inline(p)
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--jzs", action="store_true", help="JZS prior (default)")
    kind.add_argument("--default", action="store_true", help="default test, delta = 0")
    kind.add_argument("--informed", action="store_true", help="informed test centred at --delta")
    p.add_argument("--delta", type=float)
    p.add_argument("--sigma-delta", type=float)
    p.set_defaults(func=cmd_bf)

    p = sub.add_parser("dist", help="distributional significance and BF")
    _add_inline(p)
    p.add_argument("--b", type=float, required=True, help="sigma_m^2 / sigma^2 (no default)")
    p.add_argument("--delta", type=float, help="alternative effect size; enables p_sig_h1 and BF")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("equiv", help="fit log BF10 against log(1/p) over a corpus")
    p.add_argument("input", help="CSV corpus path, or - for stdin")
    p.add_argument("--sigma-delta-sq", type=float, default=1.0,
                   help="effective prior variance used for the predicted intercept C")
    p.add_argument("--output", help="write the JSON report here instead of stdout")
    p.add_argument("--figure", help="SVG path; the points CSV is written next to it")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("simulate", help="seeded corpora and Monte-Carlo scans")
    p.add_argument("--model", choices=("normal", "jzs"), default="normal")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--output", help="write the corpus (or scan JSON) here instead of stdout")
    p.add_argument("--m", type=float, default=0.0)
    p.add_argument("--sigma-m", type=float, default=0.0)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--n1", type=int, default=23)
    p.add_argument("--n2", type=int, default=23)
    p.add_argument("--scan", choices=("type1", "divergence"))
    p.add_argument("--b", type=float)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--n-grid", default="20,200,2000")
    p.add_argument("--reps", type=int, default=2000)
    p.add_argument("--mismatched", action="store_true", help="allow b different from the model's")
    p.add_argument("--delta", type=float)
    p.add_argument("--sigma-delta", type=float)
    p.add_argument("--test", choices=("point", "distributional"), default="point")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        out = args.func(args)
        if out is not None:
            text = _dump(out)
            path = getattr(args, "output", None)
            if path and (args.command != "simulate" or args.scan):
                Path(path).write_text(text, encoding="utf-8", newline="\n")
            else:
                sys.stdout.write(text)
    except NumericalError as exc:
        print(f"ttestkit: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (DataError, DomainError, FitError, OSError) as exc:
        print(f"ttestkit: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
