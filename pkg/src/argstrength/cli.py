"""Command-line pipeline surface.

Subcommands cover the full flow: hedge annotation, ensemble
aggregation, feature-table assembly, single-feature regressions,
stepwise selection, plot data, and the feature distribution table.
Exit codes: 0 success, 1 input error, 2 numerical failure
(rank deficiency or separation).
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path

from . import __version__
from .corpus import load_corpus
from .ensemble import (
    aggregate_ensemble,
    feature_distribution,
    read_aggregated,
    read_prediction_dir,
    write_aggregated,
)
from .errors import InputError, NumericalError
from .features import (
    DEFAULT_IVS,
    HEDGE_COLUMNS,
    TermSpec,
    build_feature_table,
    canonical_feature_name,
    read_feature_table,
    write_feature_table,
)
from .hedging import HEDGE_FEATURE_NAMES, annotate_corpus, read_annotations, write_annotations
from .lexicon import load_lexicon
from .regress import stepwise
from .reports import (
    DISTRIBUTION_COLUMNS,
    HEDGE_VARIANT_COLUMNS,
    PLOT_COLUMNS,
    SINGLE_COLUMNS,
    STEPWISE_COLUMNS,
    distribution_rows,
    emit,
    hedging_variant_rows,
    plot_data_rows,
    rows_to_json,
    single_regression_rows,
    stepwise_rows,
    stepwise_summary,
)

logger = logging.getLogger("argstrength")


class _Parser(argparse.ArgumentParser):
    # Usage mistakes are input errors: exit 1, not argparse's default 2.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(self._input_error(message))

    @staticmethod
    def _input_error(message):
        print(f"error: {message}", file=sys.stderr)
        return 1


def _write_output(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _split_list(raw: str | None) -> list[str] | None:
    if raw is None:
        return None
    items = [canonical_feature_name(part) for part in raw.split(",") if part.strip()]
    if not items:
        raise InputError("empty list argument")
    return items


def _load_table(args):
    if getattr(args, "features", None):
        return read_feature_table(args.features)
    if not (args.corpus and args.kind):
        raise InputError(
            "either --features or --corpus/--kind (with --aggregated and "
            "--hedges) is required")
    corpus = load_corpus(args.corpus, kind=args.kind)
    if not (getattr(args, "aggregated", None) and getattr(args, "hedges", None)):
        raise InputError("--aggregated and --hedges are required without --features")
    aggregated = read_aggregated(args.aggregated)
    hedges = read_annotations(args.hedges)
    return build_feature_table(
        corpus, aggregated, hedges, iv_selection=_split_list(args.ivs))


def cmd_annotate_hedges(args) -> int:
    corpus = load_corpus(args.corpus, kind=args.kind)
    lexicon = load_lexicon(args.lexicon)
    if args.conllu is None:
        logger.info("no CoNLL-U input; using the builtin heuristic parser")
    annotations = annotate_corpus(
        corpus, lexicon, conllu_path=args.conllu, jobs=args.jobs)
    write_annotations(annotations, args.out)
    means = {
        name: sum(getattr(a.features, name) for a in annotations) / len(annotations)
        for name in HEDGE_FEATURE_NAMES
    }
    summary = " ".join(f"{k}={v:.4f}" for k, v in means.items())
    print(f"annotated {len(annotations)} arguments; corpus means: {summary}")
    return 0


def cmd_aggregate(args) -> int:
    grouped = read_prediction_dir(args.predictions)
    excluded = set(_split_list(args.exclude) or ())
    aggregated = []
    for feature in sorted(grouped):
        if canonical_feature_name(feature) in excluded:
            logger.info("excluding feature %s by configuration", feature)
            continue
        aggregated.append(aggregate_ensemble(
            grouped[feature], threshold=args.threshold,
            half_probability=args.half_mode))
    if not aggregated:
        raise InputError("all features were excluded")
    write_aggregated(aggregated, args.out)
    print(f"aggregated {len(aggregated)} features from {args.predictions}")
    return 0


def cmd_build_features(args) -> int:
    corpus = load_corpus(args.corpus, kind=args.kind)
    aggregated = read_aggregated(args.aggregated)
    hedges = read_annotations(args.hedges)
    table = build_feature_table(
        corpus, aggregated, hedges, iv_selection=_split_list(args.ivs))
    write_feature_table(table, args.out)
    print(f"wrote {table.n} x {len(table.columns)} feature table to {args.out}")
    return 0


def _default_report_ivs(table) -> list[str]:
    ivs = [c for c in table.columns if c not in HEDGE_COLUMNS]
    if "hedge_abs_all" in table.columns:
        ivs.append("hedge_abs_all")
    return ivs


def cmd_regress_single(args) -> int:
    table = _load_table(args)
    family = "linear" if table.dv_kind == "quality" else "logistic"
    ivs = _split_list(args.report_ivs) or _default_report_ivs(table)
    rows = single_regression_rows(table, ivs)
    main_report = emit(rows, SINGLE_COLUMNS[family], args.format)

    out_dir = Path(args.out) if args.out else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    suffix = "json" if args.format == "json" else "tsv"
    _write_output(
        main_report,
        str(out_dir / f"single_regressions.{suffix}") if out_dir else None)

    if all(c in table.columns for c in HEDGE_COLUMNS):
        variant_rows = hedging_variant_rows(table)
        variant_report = emit(variant_rows, HEDGE_VARIANT_COLUMNS[family], args.format)
        _write_output(
            variant_report,
            str(out_dir / f"hedge_variants.{suffix}") if out_dir else None)
    return 0


def cmd_stepwise(args) -> int:
    table = _load_table(args)
    pool = None
    if args.pool:
        pool = [TermSpec.parse(token) for token in args.pool.split(",") if token.strip()]
    trace = stepwise(
        table, pool=pool, alpha=args.alpha, gate_method=args.gate)
    rows = stepwise_rows(trace)
    report = emit(rows, STEPWISE_COLUMNS, args.format)
    if args.format == "json":
        report = rows_to_json(
            {"steps": rows, "summary": stepwise_summary(trace)})
    else:
        summary = stepwise_summary(trace)
        report += (
            f"# final: terms={','.join(summary['selected_terms']) or '(none)'} "
            f"metric={summary['final_metric']:.4f} aic={summary['final_aic']:.4f} "
            f"n={summary['n']}\n"
        )
    _write_output(report, args.out)
    return 0


def cmd_plot_data(args) -> int:
    table = _load_table(args)
    if not args.terms:
        raise InputError("--terms is required (comma-separated, a*b for interactions)")
    terms = [TermSpec.parse(token) for token in args.terms.split(",") if token.strip()]
    rows = plot_data_rows(
        table,
        terms,
        x_iv=canonical_feature_name(args.x),
        series_iv=canonical_feature_name(args.series) if args.series else None,
        points=args.points,
        level=args.level,
    )
    if args.format == "json":
        _write_output(rows_to_json(rows), args.out)
        return 0
    columns = PLOT_COLUMNS if args.series else PLOT_COLUMNS[:-1]
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(columns)
    for row in rows:
        writer.writerow([f"{row[c]:.6f}" if c != "series" else row[c] for c in columns])
    _write_output(buffer.getvalue(), args.out)
    return 0


def cmd_distribution(args) -> int:
    corpus = load_corpus(args.corpus, kind=args.kind)
    if args.aggregated:
        aggregated = read_aggregated(args.aggregated)
    else:
        if not args.predictions:
            raise InputError("--predictions or --aggregated is required")
        grouped = read_prediction_dir(args.predictions)
        aggregated = [
            aggregate_ensemble(grouped[f], threshold=args.threshold)
            for f in sorted(grouped)
        ]
    table = feature_distribution(aggregated, corpus)
    report = emit(distribution_rows(table), DISTRIBUTION_COLUMNS, args.format)
    _write_output(report, args.out)
    return 0


def _add_output_flags(sub, default_format="tsv"):
    sub.add_argument("--out", help="output path (default: stdout)")
    sub.add_argument("--format", choices=("tsv", "json"), default=default_format)


def _add_table_flags(sub):
    sub.add_argument("--features", help="prebuilt feature table CSV")
    sub.add_argument("--corpus", help="corpus file (JSONL or CSV)")
    sub.add_argument("--kind", choices=("quality", "persuasion"))
    sub.add_argument("--aggregated", help="aggregated feature JSONL")
    sub.add_argument("--hedges", help="hedge annotation JSONL")
    sub.add_argument("--ivs", help="comma-separated IV columns to assemble")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="argstrength",
        description="Annotate argument corpora with subjective features and "
                    "quantify their impact on argument strength.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="log progress details to stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    sub = commands.add_parser("annotate-hedges", help="detect hedges per argument")
    sub.add_argument("--corpus", required=True)
    sub.add_argument("--kind", choices=("quality", "persuasion"), required=True)
    sub.add_argument("--lexicon", help="lexicon file (default: packaged)")
    sub.add_argument("--conllu", help="pre-parsed CoNLL-U input")
    sub.add_argument("--jobs", type=int, default=1)
    sub.add_argument("--out", required=True, help="annotation JSONL path")
    sub.set_defaults(handler=cmd_annotate_hedges)

    sub = commands.add_parser("aggregate", help="aggregate ensemble predictions")
    sub.add_argument("--predictions", required=True,
                     help="directory of <feature>.<model>[.<segment>].csv files")
    sub.add_argument("--threshold", type=float, default=0.5)
    sub.add_argument("--half-mode", choices=("mean", "max"), default="mean",
                     dest="half_mode")
    sub.add_argument("--exclude", help="comma-separated features to drop")
    sub.add_argument("--out", required=True, help="aggregated JSONL path")
    sub.set_defaults(handler=cmd_aggregate)

    sub = commands.add_parser("build-features", help="assemble the feature table")
    sub.add_argument("--corpus", required=True)
    sub.add_argument("--kind", choices=("quality", "persuasion"), required=True)
    sub.add_argument("--aggregated", required=True)
    sub.add_argument("--hedges", required=True)
    sub.add_argument("--ivs", help=f"IV selection (default: {','.join(DEFAULT_IVS)})")
    sub.add_argument("--out", required=True, help="feature table CSV path")
    sub.set_defaults(handler=cmd_build_features)

    sub = commands.add_parser("regress-single",
                              help="per-IV regressions and hedge-variant report")
    _add_table_flags(sub)
    sub.add_argument("--report-ivs", dest="report_ivs",
                     help="rows of the main report (default: probability "
                          "features plus the absolute hedge count)")
    sub.add_argument("--out", help="output directory (default: stdout)")
    sub.add_argument("--format", choices=("tsv", "json"), default="tsv")
    sub.set_defaults(handler=cmd_regress_single)

    sub = commands.add_parser("stepwise", help="forward stepwise selection by AIC")
    _add_table_flags(sub)
    sub.add_argument("--alpha", type=float, default=0.05)
    sub.add_argument("--gate", choices=("default", "lr", "wald_f"), default="default")
    sub.add_argument("--pool", help="candidate terms (default: all mains "
                                    "and two-way interactions)")
    _add_output_flags(sub)
    sub.set_defaults(handler=cmd_stepwise)

    sub = commands.add_parser("plot-data",
                              help="fitted curve with confidence bounds")
    _add_table_flags(sub)
    sub.add_argument("--terms", required=True,
                     help="model terms, e.g. fear,sadness,fear*sadness")
    sub.add_argument("--x", required=True, help="IV for the grid axis")
    sub.add_argument("--series", help="second IV fixed at mean and +/- 1 SD")
    sub.add_argument("--points", type=int, default=100)
    sub.add_argument("--level", type=float, default=0.95)
    _add_output_flags(sub)
    sub.set_defaults(handler=cmd_plot_data)

    sub = commands.add_parser("distribution", help="feature distribution table")
    sub.add_argument("--corpus", required=True)
    sub.add_argument("--kind", choices=("quality", "persuasion"), required=True)
    sub.add_argument("--predictions", help="prediction CSV directory")
    sub.add_argument("--aggregated", help="aggregated JSONL (skips aggregation)")
    sub.add_argument("--threshold", type=float, default=0.5)
    _add_output_flags(sub)
    sub.set_defaults(handler=cmd_distribution)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.getLogger().setLevel(
        logging.INFO if getattr(args, "verbose", False) else logging.WARNING)
    try:
        return args.handler(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
