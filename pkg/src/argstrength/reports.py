"""Report construction and TSV/JSON emission.

Row layouts mirror the analysis outputs: per-IV single regressions,
the six hedge variants, the stepwise trace, the feature distribution
table, and plot data with confidence bounds. TSV columns are fixed and
floats formatted deterministically so repeated runs diff cleanly.
"""
from __future__ import annotations

import json

import numpy as np

from .errors import InputError, NumericalError
from .features import HEDGE_COLUMNS, FeatureTable, TermSpec
from .regress import (
    FAMILY_FOR_KIND,
    ModelSpec,
    StepwiseTrace,
    fit_model,
    predict_with_ci,
)
from .stats import significance_stars


def _fmt(value, decimals=4):
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.{decimals}f}"


def rows_to_tsv(rows: list[dict], columns: list[str], decimals=4) -> str:
    lines = ["\t".join(columns)]
    for row in rows:
        lines.append("\t".join(_fmt(row.get(c), decimals) for c in columns))
    return "\n".join(lines) + "\n"


def rows_to_json(rows: list[dict]) -> str:
    return json.dumps(rows, indent=2, ensure_ascii=False) + "\n"


def emit(rows: list[dict], columns: list[str], format: str, decimals=4) -> str:
    if format == "tsv":
        return rows_to_tsv(rows, columns, decimals)
    if format == "json":
        return rows_to_json(rows)
    raise InputError(f"unknown output format {format!r}")


# ---------------------------------------------------------------------------
# Single-feature regressions
# ---------------------------------------------------------------------------

def single_regression_rows(table: FeatureTable, ivs: list[str]) -> list[dict]:
    """One single-IV model per row; numerical failures stay local to
    their row."""
    family = FAMILY_FOR_KIND[table.dv_kind]
    metric_key = "adjusted_r2" if family == "linear" else "pseudo_r2"
    effect_key = "coef" if family == "linear" else "odds"
    rows = []
    for iv in ivs:
        row = {"iv": iv}
        try:
            result = fit_model(
                table, ModelSpec(family=family, terms=(TermSpec.main(iv),)))
        except NumericalError as exc:
            row.update({metric_key: None, "p": None, "sig": "",
                        effect_key: None, "error": str(exc)})
            rows.append(row)
            continue
        term = result.by_term(iv)
        row[metric_key] = result.fit[metric_key]
        row["p"] = term["p"]
        row["sig"] = significance_stars(term["p"])
        row[effect_key] = term["odds"] if family == "logistic" else term["coef"]
        rows.append(row)
    return rows


SINGLE_COLUMNS = {
    "linear": ["iv", "adjusted_r2", "p", "sig", "coef", "error"],
    "logistic": ["iv", "pseudo_r2", "p", "sig", "odds", "error"],
}


def hedging_variant_rows(table: FeatureTable) -> list[dict]:
    """The six hedge variants, keyed by score kind and sentence scope."""
    rows = []
    for column in HEDGE_COLUMNS:
        _, score, sent = column.split("_", 2)
        base = {"score": "absolute" if score == "abs" else "ratio", "sent": sent}
        for computed in single_regression_rows(table, [column]):
            computed.pop("iv")
            rows.append({**base, **computed})
    return rows


HEDGE_VARIANT_COLUMNS = {
    "linear": ["score", "sent", "adjusted_r2", "coef", "p", "sig", "error"],
    "logistic": ["score", "sent", "pseudo_r2", "odds", "p", "sig", "error"],
}


# ---------------------------------------------------------------------------
# Stepwise trace
# ---------------------------------------------------------------------------

def stepwise_rows(trace: StepwiseTrace) -> list[dict]:
    """Trace rows: linear metric shown as percent adjusted r2, logistic
    as raw pseudo-r2. Rejected final candidates are kept, marked."""
    rows = []
    for i, step in enumerate(trace.steps):
        label = step.term.label if i == 0 else f"+ {step.term.label}"
        metric = step.metric * 100.0 if trace.family == "linear" else step.metric
        rows.append({
            "term": label,
            "metric": metric,
            "gate_p": step.gate_p,
            "sig": significance_stars(step.gate_p),
            "accepted": "yes" if step.accepted else "no",
        })
    return rows


STEPWISE_COLUMNS = ["term", "metric", "gate_p", "sig", "accepted"]


def stepwise_summary(trace: StepwiseTrace) -> dict:
    metric = (
        trace.final_result.fit["adjusted_r2"] * 100.0
        if trace.family == "linear"
        else trace.final_result.fit["pseudo_r2"]
    )
    return {
        "family": trace.family,
        "selected_terms": [t.label for t in trace.final_terms],
        "final_metric": metric,
        "final_aic": trace.final_result.aic,
        "n": trace.final_result.n,
    }


# ---------------------------------------------------------------------------
# Distribution table
# ---------------------------------------------------------------------------

DISTRIBUTION_COLUMNS = ["feature", "positives", "pct", "mean_probability"]


def distribution_rows(table: list[dict]) -> list[dict]:
    return [
        {
            "feature": row["feature"],
            "positives": row["positives"],
            "pct": round(row["pct"], 1),
            "mean_probability": row["mean_probability"],
        }
        for row in table
    ]


# ---------------------------------------------------------------------------
# Plot data
# ---------------------------------------------------------------------------

def plot_data_rows(
    table: FeatureTable,
    terms: list[TermSpec],
    x_iv: str,
    series_iv: str | None = None,
    points: int = 100,
    level: float = 0.95,
) -> list[dict]:
    """Fitted curve with confidence bounds along one IV.

    Other IVs are held at their column means; with ``series_iv`` the
    curve is repeated at mean - 1 SD, mean, and mean + 1 SD of that IV.
    """
    if points < 1:
        raise InputError("grid needs at least one point")
    family = FAMILY_FOR_KIND[table.dv_kind]
    result = fit_model(table, ModelSpec(family=family, terms=tuple(terms)))

    iv_names: list[str] = []
    for term in terms:
        for name in term.names:
            if name not in iv_names:
                iv_names.append(name)
    if x_iv not in iv_names:
        raise InputError(f"grid IV {x_iv!r} is not part of the model terms")
    if series_iv is not None and series_iv not in iv_names:
        raise InputError(f"series IV {series_iv!r} is not part of the model terms")

    x_col = table.column(x_iv)
    xs = (
        np.linspace(float(x_col.min()), float(x_col.max()), points)
        if points > 1
        else np.array([float(x_col.mean())])
    )
    means = {name: float(table.column(name).mean()) for name in iv_names}

    if series_iv is None:
        series_settings = [(None, None)]
    else:
        s_col = table.column(series_iv)
        sd = float(s_col.std(ddof=1)) if len(s_col) > 1 else 0.0
        series_settings = [
            (offset, means[series_iv] + offset * sd) for offset in (-1, 0, 1)
        ]

    rows = []
    for offset, series_value in series_settings:
        settings = dict(means)
        if series_iv is not None:
            settings[series_iv] = series_value
        grid = np.empty((len(xs), len(terms)))
        for i, x_value in enumerate(xs):
            settings[x_iv] = float(x_value)
            for j, term in enumerate(terms):
                value = 1.0
                for name in term.names:
                    value *= settings[name]
                grid[i, j] = value
        bands = predict_with_ci(result, grid, level=level)
        for x_value, (fitted, lower, upper) in zip(xs, bands):
            row = {
                "x": float(x_value),
                "fitted": float(fitted),
                "lower": float(lower),
                "upper": float(upper),
            }
            if series_iv is not None:
                row["series"] = f"{series_iv}{offset:+d}sd"
            rows.append(row)
    return rows


PLOT_COLUMNS = ["x", "fitted", "lower", "upper", "series"]
