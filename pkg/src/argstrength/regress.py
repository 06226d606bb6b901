"""Linear and logistic regression with inference, nested-model gates,
and forward stepwise selection by AIC.

The linear fit goes through a QR decomposition (the normal equations
exist only as a test oracle); the logistic fit is iteratively
reweighted least squares started at zero with step halving. AIC uses
the Gaussian maximum-likelihood convention for linear models and
2p - 2LL for logistic ones, so differences within one family are the
selection signal.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular
from scipy.special import expit

from .errors import InputError, RankDeficiencyError, SeparationError
from .features import FeatureTable, TermSpec, materialize_terms
from .stats import (
    normal_quantile,
    significance_stars,
    t_quantile,
    two_sided_t_p,
    two_sided_z_p,
    upper_chi2_p,
    upper_f_p,
)

logger = logging.getLogger(__name__)

_RANK_RTOL = 1e-10
_IRLS_MAX_ITER = 100
_IRLS_COEF_TOL = 1e-8
_IRLS_LL_TOL = 1e-10
_SEPARATION_NORM = 1e4

FAMILY_FOR_KIND = {"quality": "linear", "persuasion": "logistic"}


@dataclass(frozen=True)
class ModelSpec:
    family: str
    terms: tuple[TermSpec, ...]
    intercept: bool = True

    def __post_init__(self):
        if self.family not in ("linear", "logistic"):
            raise ValueError(f"unknown family {self.family!r}")


@dataclass(frozen=True)
class RegressionResult:
    """Fitted coefficients with full inference statistics."""

    family: str
    term_names: tuple[str, ...]          # includes "intercept" when present
    coefficients: np.ndarray
    std_errors: np.ndarray
    test_stats: np.ndarray               # t (linear) or Wald z (logistic)
    p_values: np.ndarray
    cov: np.ndarray
    fit: dict
    aic: float
    n: int
    has_intercept: bool
    converged: bool = True
    odds: np.ndarray | None = None       # exp(beta), logistic only

    @property
    def p(self) -> int:
        return len(self.term_names)

    @property
    def df_resid(self) -> int:
        return self.n - self.p

    def stars(self) -> list[str]:
        return [significance_stars(p) for p in self.p_values]

    def by_term(self, name: str) -> dict:
        """Coefficient row for one term, as a plain dict."""
        try:
            idx = self.term_names.index(name)
        except ValueError:
            raise InputError(f"term {name!r} not in model") from None
        row = {
            "term": name,
            "coef": float(self.coefficients[idx]),
            "std_error": float(self.std_errors[idx]),
            "stat": float(self.test_stats[idx]),
            "p": float(self.p_values[idx]),
        }
        if self.odds is not None:
            row["odds"] = float(self.odds[idx])
        return row


def _validate_design(X: np.ndarray, y: np.ndarray, names) -> tuple[np.ndarray, np.ndarray, list[str]]:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2:
        raise InputError("design matrix must be 2-D")
    n, p = X.shape
    if y.shape != (n,):
        raise InputError(f"response of length {y.shape} does not match {n} rows")
    if names is None:
        names = [f"x{j}" for j in range(p)]
    names = list(names)
    if len(names) != p:
        raise InputError("column name count does not match design matrix")
    if n <= p:
        raise InputError(f"need more observations than parameters (n={n}, p={p})")
    if not np.all(np.isfinite(X)) or not np.all(np.isfinite(y)):
        raise InputError("design matrix and response must be finite")
    _check_rank(X, names)
    return X, y, names


def _check_rank(X: np.ndarray, names) -> None:
    _, singular, vt = np.linalg.svd(X)
    if singular[0] == 0.0:
        raise RankDeficiencyError(list(names))
    if singular[-1] < _RANK_RTOL * singular[0]:
        # Null-space directions point at the collinear columns.
        rank = int(np.sum(singular >= _RANK_RTOL * singular[0]))
        involved = {
            names[j]
            for row in vt[rank:]
            for j in np.nonzero(np.abs(row) > 1e-8)[0]
        }
        raise RankDeficiencyError(sorted(involved) or list(names))


def fit_linear(X, y, names=None, has_intercept: bool = True) -> RegressionResult:
    """Ordinary least squares with t-tests.

    Minimizes the residual sum of squares via QR; the coefficient
    covariance is sigma2 * (X'X)^-1 with sigma2 = RSS / (n - p).
    """
    X, y, names = _validate_design(X, y, names)
    n, p = X.shape

    q, r = np.linalg.qr(X)
    beta = solve_triangular(r, q.T @ y)
    resid = y - X @ beta
    rss = float(resid @ resid)
    df = n - p
    sigma2 = rss / df

    r_inv = solve_triangular(r, np.eye(p))
    xtx_inv = r_inv @ r_inv.T
    cov = sigma2 * xtx_inv
    se = np.sqrt(np.diag(cov))

    with np.errstate(divide="ignore", invalid="ignore"):
        t_stats = beta / se
    t_stats = np.where(np.isnan(t_stats), 0.0, t_stats)  # 0/0: no evidence
    p_values = np.array([
        0.0 if np.isinf(t) else two_sided_t_p(t, df) for t in t_stats
    ])

    if has_intercept:
        tss = float(np.sum((y - y.mean()) ** 2))
    else:
        tss = float(y @ y)
    if tss > 0:
        r2 = 1.0 - rss / tss
        adjusted = 1.0 - (1.0 - r2) * (n - 1) / (n - p)
    else:
        r2 = 0.0
        adjusted = 0.0

    if rss > 0:
        log_likelihood = -0.5 * n * (math.log(2.0 * math.pi * rss / n) + 1.0)
        aic = n * math.log(rss / n) + 2 * p + n * (1.0 + math.log(2.0 * math.pi))
    else:
        log_likelihood = math.inf
        aic = -math.inf

    return RegressionResult(
        family="linear",
        term_names=tuple(names),
        coefficients=beta,
        std_errors=se,
        test_stats=t_stats,
        p_values=p_values,
        cov=cov,
        fit={
            "r2": r2,
            "adjusted_r2": adjusted,
            "rss": rss,
            "sigma2": sigma2,
            "log_likelihood": log_likelihood,
        },
        aic=aic,
        n=n,
        has_intercept=has_intercept,
    )


def _bernoulli_ll(y: np.ndarray, eta: np.ndarray) -> float:
    # log sigma(eta) = -log(1 + e^-eta), stable on both tails
    return float(np.sum(y * eta - np.logaddexp(0.0, eta)))


def fit_logistic(X, y, names=None, has_intercept: bool = True) -> RegressionResult:
    """Maximum-likelihood logistic regression with Wald z-tests.

    Newton/IRLS from beta = 0 with step halving; stops when the step
    or the likelihood change is below tolerance. Diverging
    coefficients or a likelihood that keeps moving at the iteration
    cap raise ``SeparationError``.
    """
    X, y, names = _validate_design(X, y, names)
    n, p = X.shape
    if not np.all((y == 0.0) | (y == 1.0)):
        raise InputError("logistic response must be binary (0/1)")
    if y.min() == y.max():
        raise InputError("logistic response contains a single class")

    beta = np.zeros(p)
    ll = _bernoulli_ll(y, X @ beta)
    converged = False
    for _ in range(_IRLS_MAX_ITER):
        eta = X @ beta
        mu = expit(eta)
        w = np.clip(mu * (1.0 - mu), 1e-12, None)
        score = X.T @ (y - mu)
        hessian = X.T @ (X * w[:, None])
        try:
            step = np.linalg.solve(hessian, score)
        except np.linalg.LinAlgError:
            raise SeparationError(
                "logistic information matrix is singular (separation or "
                "collinearity at the current iterate)") from None
        # Step halving keeps the likelihood non-decreasing.
        scale = 1.0
        for _ in range(30):
            candidate = beta + scale * step
            new_ll = _bernoulli_ll(y, X @ candidate)
            if new_ll >= ll - 1e-12:
                break
            scale *= 0.5
        beta = beta + scale * step
        if np.linalg.norm(beta) > _SEPARATION_NORM:
            raise SeparationError(
                "coefficients diverged; data are perfectly separable")
        delta_ll = new_ll - ll
        ll = new_ll
        if np.max(np.abs(scale * step)) < _IRLS_COEF_TOL or abs(delta_ll) < _IRLS_LL_TOL:
            converged = True
            break
    if not converged:
        raise SeparationError(
            "log-likelihood failed to converge; data are likely separable")

    eta = X @ beta
    mu = expit(eta)
    w = mu * (1.0 - mu)
    hessian = X.T @ (X * w[:, None])
    cov = np.linalg.inv(hessian)
    se = np.sqrt(np.diag(cov))
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(se > 0, beta / se, 0.0)
    p_values = np.array([two_sided_z_p(v) for v in z])

    p_bar = float(y.mean())
    null_ll = n * (p_bar * math.log(p_bar) + (1.0 - p_bar) * math.log(1.0 - p_bar))
    pseudo_r2 = 1.0 - ll / null_ll if null_ll != 0 else 0.0

    return RegressionResult(
        family="logistic",
        term_names=tuple(names),
        coefficients=beta,
        std_errors=se,
        test_stats=z,
        p_values=p_values,
        cov=cov,
        fit={
            "log_likelihood": ll,
            "null_log_likelihood": null_ll,
            "pseudo_r2": pseudo_r2,
        },
        aic=2 * p - 2 * ll,
        n=n,
        has_intercept=has_intercept,
        converged=converged,
        odds=np.exp(beta),
    )


def fit_model(table: FeatureTable, spec: ModelSpec) -> RegressionResult:
    """Materialize a model's terms from a feature table and fit it."""
    expected = FAMILY_FOR_KIND[table.dv_kind]
    if spec.family != expected:
        raise InputError(
            f"family {spec.family!r} does not match dv kind "
            f"{table.dv_kind!r} (expected {expected!r})")
    X, names = materialize_terms(table, list(spec.terms), intercept=spec.intercept)
    if spec.family == "linear":
        return fit_linear(X, table.dv, names, has_intercept=spec.intercept)
    return fit_logistic(X, table.dv, names, has_intercept=spec.intercept)


# ---------------------------------------------------------------------------
# Nested-model gates
# ---------------------------------------------------------------------------

def nested_gate(
    small: RegressionResult,
    large: RegressionResult,
    method: str = "default",
) -> tuple[float, float]:
    """Significance of the terms added between two nested fits.

    Linear: partial F-test on the RSS drop. Logistic: likelihood-ratio
    chi-square by default, or a Wald test on the added coefficients
    referred to F (``method="wald_f"``).
    """
    if small.family != large.family:
        raise InputError("cannot compare models of different families")
    if small.n != large.n:
        raise InputError("nested models must be fitted to the same data")
    small_terms = set(small.term_names)
    large_terms = set(large.term_names)
    if not small_terms < large_terms:
        raise InputError(
            "models are not strictly nested (small terms must be a proper "
            "subset of large terms)")
    q = large.p - small.p

    if large.family == "linear":
        if method not in ("default", "partial_f"):
            raise InputError(f"unknown linear gate method {method!r}")
        rss_small = small.fit["rss"]
        rss_large = large.fit["rss"]
        df_large = large.df_resid
        if rss_large <= 0:
            return math.inf, 0.0
        f_stat = ((rss_small - rss_large) / q) / (rss_large / df_large)
        f_stat = max(f_stat, 0.0)
        return f_stat, upper_f_p(f_stat, q, df_large)

    if method in ("default", "lr"):
        lr = 2.0 * (large.fit["log_likelihood"] - small.fit["log_likelihood"])
        lr = max(lr, 0.0)
        return lr, upper_chi2_p(lr, q)
    if method == "wald_f":
        added = [i for i, name in enumerate(large.term_names)
                 if name not in small_terms]
        beta = large.coefficients[added]
        sub_cov = large.cov[np.ix_(added, added)]
        wald = float(beta @ np.linalg.solve(sub_cov, beta)) / q
        return wald, upper_f_p(wald, q, large.df_resid)
    raise InputError(f"unknown logistic gate method {method!r}")


# ---------------------------------------------------------------------------
# Stepwise forward selection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StepwiseStep:
    term: TermSpec
    metric: float
    gate_stat: float
    gate_p: float
    accepted: bool
    aic: float


@dataclass(frozen=True)
class StepwiseTrace:
    family: str
    steps: tuple[StepwiseStep, ...]
    final_terms: tuple[TermSpec, ...]
    final_result: RegressionResult

    def accepted_labels(self) -> list[str]:
        return [s.term.label for s in self.steps if s.accepted]


def default_candidate_pool(column_names) -> list[TermSpec]:
    """Main effects in registry order, then all two-way interactions in
    lexicographic order."""
    names = list(column_names)
    pool = [TermSpec.main(name) for name in names]
    pairs = sorted(
        tuple(sorted((a, b))) for i, a in enumerate(names) for b in names[i + 1:]
    )
    pool.extend(TermSpec.interaction(a, b) for a, b in pairs)
    return pool


def _metric(result: RegressionResult) -> float:
    if result.family == "linear":
        return result.fit["adjusted_r2"]
    return result.fit["pseudo_r2"]


def stepwise(
    table: FeatureTable,
    pool: list[TermSpec] | None = None,
    family: str | None = None,
    alpha: float = 0.05,
    gate_method: str = "default",
) -> StepwiseTrace:
    """Greedy forward selection.

    Each round fits the current model plus every remaining candidate,
    takes the one with the lowest AIC, and accepts it only if it both
    lowers the AIC and passes the nested-model gate at ``alpha``.
    Candidates that fail numerically are skipped with a warning. There
    is no marginality constraint: interactions may enter without their
    main effects.
    """
    family = family or FAMILY_FOR_KIND[table.dv_kind]
    if pool is None:
        pool = default_candidate_pool(table.columns)
    if not pool:
        raise InputError("stepwise needs a non-empty candidate pool")
    seen = set()
    for term in pool:
        if term.label in seen:
            raise InputError(f"duplicate candidate {term.label!r}")
        seen.add(term.label)

    current_terms: list[TermSpec] = []
    current = fit_model(table, ModelSpec(family=family, terms=()))
    steps: list[StepwiseStep] = []

    remaining = list(pool)
    while remaining:
        best = None
        for candidate in remaining:
            try:
                result = fit_model(table, ModelSpec(
                    family=family, terms=tuple(current_terms + [candidate])))
            except (RankDeficiencyError, SeparationError) as exc:
                logger.warning("skipping candidate %s: %s", candidate.label, exc)
                continue
            if best is None or result.aic < best[1].aic:
                best = (candidate, result)
        if best is None:
            break
        candidate, result = best
        if not result.aic < current.aic:
            break
        stat, p_value = nested_gate(current, result, method=gate_method)
        accepted = p_value < alpha
        steps.append(StepwiseStep(
            term=candidate,
            metric=_metric(result),
            gate_stat=stat,
            gate_p=p_value,
            accepted=accepted,
            aic=result.aic,
        ))
        if not accepted:
            break
        current_terms.append(candidate)
        current = result
        remaining = [t for t in remaining if t.label != candidate.label]

    return StepwiseTrace(
        family=family,
        steps=tuple(steps),
        final_terms=tuple(current_terms),
        final_result=current,
    )


# ---------------------------------------------------------------------------
# Prediction with confidence intervals
# ---------------------------------------------------------------------------

def predict_with_ci(
    result: RegressionResult,
    grid: np.ndarray,
    level: float = 0.95,
) -> np.ndarray:
    """Fitted values with confidence bounds at the grid points.

    ``grid`` has one column per model term (without the intercept,
    which is added automatically). Linear models get mean-response
    intervals from the t distribution; logistic models get intervals
    on the linear predictor mapped through the inverse logit. Returns
    an (m, 3) array of (fitted, lower, upper).
    """
    if not 0.0 <= level < 1.0:
        raise InputError(f"confidence level must lie in [0, 1), got {level}")
    grid = np.atleast_2d(np.asarray(grid, dtype=float))
    expected = result.p - (1 if result.has_intercept else 0)
    if grid.shape[1] != expected:
        raise InputError(
            f"grid has {grid.shape[1]} columns but the model has "
            f"{expected} non-intercept terms")
    X = np.column_stack([np.ones(len(grid)), grid]) if result.has_intercept else grid

    eta = X @ result.coefficients
    var = np.einsum("ij,jk,ik->i", X, result.cov, X)
    se = np.sqrt(np.maximum(var, 0.0))
    if result.family == "linear":
        quantile = t_quantile(0.5 + level / 2.0, result.df_resid)
        half = quantile * se
        return np.column_stack([eta, eta - half, eta + half])
    quantile = normal_quantile(0.5 + level / 2.0)
    return np.column_stack([
        expit(eta), expit(eta - quantile * se), expit(eta + quantile * se)
    ])
