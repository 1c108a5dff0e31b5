"""Theoretical and empirical autocorrelation functions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import DomainError
from .structures import CountSeries

__all__ = [
    "AcfCurve",
    "type_a_acf",
    "type_b_acf",
    "inar1_acf",
    "theoretical_acf",
    "empirical_acf",
    "bartlett_se",
]


@dataclass(frozen=True)
class AcfCurve:
    lags: np.ndarray
    values: np.ndarray

    def __getitem__(self, lag):
        return self.values[lag]


def _alpha_at(alpha, t):
    """alpha_t with the zero convention for t <= 0; scalars are stationary."""
    if np.ndim(alpha) == 0:
        return float(alpha) if t >= 1 else 0.0
    if t <= 0:
        return 0.0
    if t > len(alpha):
        raise DomainError(f"alpha_{t} requested but only {len(alpha)} values given")
    return float(alpha[t - 1])


def _alphas(params):
    return getattr(params, "alpha", params)


def type_a_acf(params, p, t, s):
    """Corr(X_t, X_{t+s}) under Type A: sum of alpha_{t-i} for i = 0..p-s."""
    if s <= 0:
        raise DomainError("lag s must be positive")
    if t < 1:
        raise DomainError("t must be at least 1")
    if s > p:
        return 0.0
    alpha = _alphas(params)
    return sum(_alpha_at(alpha, t - i) for i in range(p - s + 1))


def type_b_acf(params, p, t, s):
    """Corr(X_t, X_{t+s}) under Type B: alpha_t alpha_{t+s} (p+1-s)/(p+1)."""
    if s <= 0:
        raise DomainError("lag s must be positive")
    if t < 1:
        raise DomainError("t must be at least 1")
    if s > p:
        return 0.0
    alpha = _alphas(params)
    return _alpha_at(alpha, t) * _alpha_at(alpha, t + s) * (p + 1 - s) / (p + 1)


def inar1_acf(alpha, s):
    if s < 0:
        raise DomainError("lag s must be nonnegative")
    return float(alpha) ** s


def theoretical_acf(kind, alpha, p, max_lag, t=None):
    """Curve over lags ``0..max_lag``; ``alpha`` scalar means stationary.

    For time-varying ``alpha`` the curve is anchored at ``t`` (default: the
    first interior time ``p + 1``).
    """
    if kind == "inar1":
        vals = [inar1_acf(alpha, s) for s in range(max_lag + 1)]
    else:
        fn = {"typeA": type_a_acf, "typeB": type_b_acf}[kind]
        t = p + 1 if t is None else t
        vals = [1.0] + [fn(alpha, p, t, s) for s in range(1, max_lag + 1)]
    return AcfCurve(np.arange(max_lag + 1), np.asarray(vals))


def empirical_acf(x, max_lag):
    """Sample ACF with global-mean centring and the biased 1/T covariance."""
    x = np.asarray(x.x if isinstance(x, CountSeries) else x, dtype=np.float64)
    n = x.size
    if max_lag < 0 or n <= max_lag:
        raise DomainError(f"need T > max_lag (T={n}, max_lag={max_lag})")
    d = x - x.mean()
    c0 = d @ d / n
    if c0 == 0:
        raise DomainError("constant series has undefined autocorrelation")
    vals = np.array([d[: n - k] @ d[k:] / n for k in range(max_lag + 1)]) / c0
    vals[0] = 1.0
    return AcfCurve(np.arange(max_lag + 1), vals)


def bartlett_se(rho, k, n):
    """Large-sample standard error of the lag-k sample ACF (Bartlett's formula).

    ``rho`` is the theoretical ACF at lags ``0, 1, ...``; values past its end
    are taken as zero.
    """
    rho = np.asarray(rho, dtype=np.float64)
    L = rho.size

    def r(j):
        j = abs(j)
        return rho[j] if j < L else 0.0

    total = 0.0
    for m in range(1, L + k + 1):
        total += (r(m + k) + r(m - k) - 2.0 * r(k) * r(m)) ** 2
    return float(np.sqrt(total / n))
