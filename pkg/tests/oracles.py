"""Independent oracles the tests check the implementations against.

Each oracle deliberately takes a different computational route than
the code under test: normal equations instead of QR, derivative-free
coordinate search instead of IRLS, explicit enumeration instead of the
production matching/selection loops.
"""
from __future__ import annotations

import math

import numpy as np


def normal_equation_solve(X, y):
    """OLS coefficients straight from the normal equations."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    return np.linalg.solve(X.T @ X, X.T @ y)


def bernoulli_log_likelihood(X, y, beta):
    eta = X @ beta
    return float(np.sum(y * eta - np.logaddexp(0.0, eta)))


def coordinate_search_logistic(X, y, step=0.5, min_step=1e-7):
    """Derivative-free likelihood maximization by per-coordinate grid
    refinement: try +/- step moves per coordinate, halve the step once
    no move improves."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    beta = np.zeros(X.shape[1])
    best = bernoulli_log_likelihood(X, y, beta)
    while step > min_step:
        improved = False
        for j in range(len(beta)):
            moved = True
            while moved:
                moved = False
                for direction in (step, -step):
                    candidate = beta.copy()
                    candidate[j] += direction
                    ll = bernoulli_log_likelihood(X, y, candidate)
                    if ll > best:
                        beta, best = candidate, ll
                        improved = moved = True
                        break
        if not improved:
            step /= 2.0
    return beta


def brute_force_hedge_matches(word_sequence, patterns):
    """Greedy longest-match enumeration over a lowercased word list.

    Returns (start, end) index pairs into the word list. Patterns are
    plain tuples; no rules are involved.
    """
    matches = []
    i = 0
    n = len(word_sequence)
    while i < n:
        longest = None
        for pattern in patterns:
            size = len(pattern)
            if i + size <= n and tuple(word_sequence[i:i + size]) == pattern:
                if longest is None or size > len(longest):
                    longest = pattern
        if longest is None:
            i += 1
        else:
            matches.append((i, i + len(longest)))
            i += len(longest)
    return matches


def gaussian_aic(X, y, beta):
    """AIC under the Gaussian ML convention, from first principles."""
    X = np.asarray(X, dtype=float)
    resid = np.asarray(y, dtype=float) - X @ beta
    n, p = X.shape
    rss = float(resid @ resid)
    ll = -0.5 * n * (math.log(2.0 * math.pi * rss / n) + 1.0)
    return 2.0 * p - 2.0 * ll


def exhaustive_forward_selection(fit_aic, candidates, alpha, gate_p):
    """Reference forward-selection loop over explicit model sets.

    ``fit_aic(terms)`` returns the AIC of a model (or None when it
    cannot be fitted); ``gate_p(small_terms, large_terms)`` the nested
    gate p-value. Candidate order breaks AIC ties. Returns the ordered
    list of accepted candidates.
    """
    selected = []
    remaining = list(candidates)
    current_aic = fit_aic(())
    while remaining:
        scored = []
        for candidate in remaining:
            aic = fit_aic(tuple(selected + [candidate]))
            if aic is not None:
                scored.append((aic, candidate))
        if not scored:
            break
        best_aic = min(score[0] for score in scored)
        best = next(c for aic, c in scored if aic == best_aic)
        if not best_aic < current_aic:
            break
        if not gate_p(tuple(selected), tuple(selected + [best])) < alpha:
            break
        selected.append(best)
        remaining = [c for c in remaining if c != best]
        current_aic = best_aic
    return selected
