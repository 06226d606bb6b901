"""Distribution CDFs, p-values, and significance stars.

The CDFs delegate to scipy's incomplete-beta/gamma backed routines
(ndtr, stdtr, fdtr, chdtr), which are accurate well beyond the 1e-10
the inference code needs. Two-sided p-values use the symmetric tail
directly to keep precision for large statistics.
"""
from __future__ import annotations

import math

from scipy import special


def _check_df(value: float, name: str) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise ValueError(f"{name} must be a positive finite number, got {value}")
    return value


def normal_cdf(x: float) -> float:
    """Standard normal CDF."""
    return float(special.ndtr(x))


def t_cdf(x: float, df: float) -> float:
    """Student-t CDF with ``df`` degrees of freedom."""
    df = _check_df(df, "df")
    return float(special.stdtr(df, x))


def chi2_cdf(x: float, df: float) -> float:
    """Chi-square CDF; 0 below the support."""
    df = _check_df(df, "df")
    if x <= 0:
        return 0.0
    return float(special.chdtr(df, x))


def f_cdf(x: float, dfn: float, dfd: float) -> float:
    """F-distribution CDF; 0 below the support."""
    dfn = _check_df(dfn, "dfn")
    dfd = _check_df(dfd, "dfd")
    if x <= 0:
        return 0.0
    return float(special.fdtr(dfn, dfd, x))


def distribution_cdf(kind: str, x: float, **params) -> float:
    """Dispatch by distribution name: normal, student_t, chi2, f."""
    if kind == "normal":
        return normal_cdf(x)
    if kind == "student_t":
        return t_cdf(x, params["df"])
    if kind == "chi2":
        return chi2_cdf(x, params["df"])
    if kind == "f":
        return f_cdf(x, params["dfn"], params["dfd"])
    raise ValueError(f"unknown distribution kind {kind!r}")


def normal_quantile(q: float) -> float:
    if not 0.0 < q < 1.0:
        raise ValueError(f"quantile level must lie in (0, 1), got {q}")
    return float(special.ndtri(q))


def t_quantile(q: float, df: float) -> float:
    df = _check_df(df, "df")
    if not 0.0 < q < 1.0:
        raise ValueError(f"quantile level must lie in (0, 1), got {q}")
    return float(special.stdtrit(df, q))


def two_sided_t_p(stat: float, df: float) -> float:
    """P(|T| >= |stat|) for Student-t."""
    if math.isnan(stat):
        return 1.0
    return min(1.0, 2.0 * t_cdf(-abs(stat), df))


def two_sided_z_p(stat: float) -> float:
    """P(|Z| >= |stat|) for the standard normal."""
    if math.isnan(stat):
        return 1.0
    return min(1.0, 2.0 * normal_cdf(-abs(stat)))


def upper_chi2_p(stat: float, df: float) -> float:
    if stat <= 0:
        return 1.0
    return float(special.chdtrc(df, stat))


def upper_f_p(stat: float, dfn: float, dfd: float) -> float:
    if stat <= 0:
        return 1.0
    return float(special.fdtrc(dfn, dfd, stat))


def significance_stars(p: float) -> str:
    """Star legend: *** p<0.001, ** p<0.01, * p<0.05."""
    if p < 0.001:
        return "***"
    if p < 0.01:
        return "**"
    if p < 0.05:
        return "*"
    return ""
