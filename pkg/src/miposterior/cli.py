"""Command-line front end: read a table, select prior and outputs, emit a report.

The JSON report is the stable contract: full-precision numbers, no timestamp,
byte-identical across runs for the same flags, input, and seed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict

import numpy as np

from . import __version__
from .errors import NumericPreconditionError, ValidationError
from .fit import central_to_raw, fit_poly_ansatz, fit_two_moment, survival
from .mc import mc_estimate
from .moments import point_stats, summarize
from .tables import CountsTable, PriorSpec, apply_prior, parse_table

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PRECONDITION = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("error: %s\n" % message)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="miposterior",
        description="Posterior moments, fitted densities, and tail quantiles "
        "of the mutual information of a contingency table under a Dirichlet prior.",
    )
    p.add_argument("--input", required=True, help="path to the contingency table")
    p.add_argument("--input-format", choices=("csv", "tsv", "json"), default="csv")
    p.add_argument("--prior",
                   choices=("haldane", "perks", "jeffreys", "uniform", "custom"),
                   default="jeffreys")
    p.add_argument("--prior-matrix", default=None,
                   help="path to pseudo-count matrix (required with --prior custom)")
    p.add_argument("--var-order", choices=("1", "2", "auto"), default="auto")
    p.add_argument("--fit", choices=("normal", "gamma", "lognormal", "ansatz", "none"),
                   default="gamma")
    p.add_argument("--quantile", type=float, action="append", default=[],
                   metavar="X", help="report p(I > X); repeatable")
    p.add_argument("--mc", type=int, default=0, metavar="N",
                   help="add a Monte Carlo block with N samples")
    p.add_argument("--mc-seed", type=int, default=0, metavar="S")
    p.add_argument("--format", choices=("json", "text"), default="json")
    return p


def _clean(obj):
    """Make a report JSON-serializable: arrays to lists, NaN/inf to None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def _build_report(args) -> dict:
    with open(args.input, "r", encoding="utf-8") as fh:
        table = parse_table(fh.read(), args.input_format)
    if args.prior == "custom":
        if args.prior_matrix is None:
            raise ValidationError("--prior custom requires --prior-matrix")
        with open(args.prior_matrix, "r", encoding="utf-8") as fh:
            matrix = parse_table(fh.read(), args.input_format).counts
        prior = PriorSpec("custom", matrix)
    else:
        prior = PriorSpec(args.prior)
    post = apply_prior(table, prior)
    summary = summarize(post)
    stats = point_stats(post)

    if args.var_order == "1":
        var_used, var_order_used = summary.var_o1, 1
    elif args.var_order == "2":
        if not post.all_positive:
            raise NumericPreconditionError(
                "--var-order 2 requires strictly positive posterior cells; "
                "zero cells at %s (use a positive prior)" % (post.zero_cells(),)
            )
        var_used, var_order_used = summary.var_o2, 2
    else:
        if post.all_positive and math.isfinite(summary.var_o2) and summary.var_o2 > 0:
            var_used, var_order_used = summary.var_o2, 2
        else:
            var_used, var_order_used = summary.var_o1, 1

    fit_block = None
    fit_result = None
    if args.fit != "none":
        if args.fit == "ansatz":
            if not post.all_positive:
                raise NumericPreconditionError(
                    "ansatz fit needs third/fourth moments, which require "
                    "strictly positive posterior cells; zero cells at %s"
                    % (post.zero_cells(),)
                )
            raw = central_to_raw(summary.mean_exact, var_used,
                                 summary.central3, summary.central4)
            fit_result = fit_poly_ansatz(*raw, base="gamma",
                                         support_max=summary.i_max * 1.05)
        else:
            if not var_used > 0:
                raise NumericPreconditionError(
                    "fit requires positive variance; the table is "
                    "independence-degenerate at this order"
                )
            fit_result = fit_two_moment(summary.mean_exact, var_used, args.fit)
        fit_block = asdict(fit_result)

    quantiles = []
    if args.quantile:
        if fit_result is None:
            raise ValidationError("--quantile requires a fitted density (--fit != none)")
        for t in args.quantile:
            quantiles.append({"threshold": t, "p_exceed": survival(fit_result, t)})

    mc_block = None
    if args.mc:
        est = mc_estimate(post, args.mc, seed=args.mc_seed,
                          thresholds=tuple(args.quantile))
        mc_block = asdict(est)

    return _clean({
        "tool": "miposterior",
        "version": __version__,
        "input": {
            "table": table.counts,
            "prior": args.prior,
            "prior_matrix": prior.matrix if prior.kind == "custom" else None,
            "r": table.r,
            "s": table.s,
            "posterior_counts": post.counts,
            "n": post.total,
            "all_positive": post.all_positive,
        },
        "point_stats": asdict(stats),
        "moments": asdict(summary),
        "var_order_used": var_order_used,
        "variance_used": var_used,
        "fit": fit_block,
        "quantiles": quantiles,
        "mc": mc_block,
        "seed": args.mc_seed,
    })


def _print_text(report: dict, out) -> None:
    mom = report["moments"]
    out.write("table: %d x %d, n = %r, prior = %s\n" % (
        report["input"]["r"], report["input"]["s"],
        report["input"]["n"], report["input"]["prior"]))
    for key in ("mean_exact", "mean_o2", "var_o1", "var_o2", "central3",
                "central4", "skewness", "kurtosis", "i_max", "validity_ratio"):
        out.write("%-15s %r\n" % (key, mom[key]))
    if mom["flags"]:
        out.write("flags: %s\n" % json.dumps(mom["flags"]))
    if report["fit"]:
        out.write("fit (%s): %s\n" % (report["fit"]["family"],
                                      json.dumps(report["fit"]["params"])))
    for q in report["quantiles"]:
        out.write("p(I > %r) = %r\n" % (q["threshold"], q["p_exceed"]))
    if report["mc"]:
        mc = report["mc"]
        out.write("mc: N = %d, mean = %r (se %r), var = %r (se %r)\n" % (
            mc["sample_count"], mc["mean"], mc["se_mean"],
            mc["variance"], mc["se_variance"]))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = _build_report(args)
    except NumericPreconditionError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_PRECONDITION
    except (ValidationError, OSError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return EXIT_VALIDATION
    if args.format == "json":
        sys.stdout.write(json.dumps(report, allow_nan=False) + "\n")
    else:
        _print_text(report, sys.stdout)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
