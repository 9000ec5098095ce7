"""Kalman-filter likelihood and concentrated regression for ARMA errors.

The hot recursion lives in the compiled ``_filter`` extension when it was
built; otherwise the numerically identical pure-numpy kernel is used.
``backend()`` reports which one is active.
"""
from __future__ import annotations

import numpy as np

from ..errors import NumericalDivergence
from .statespace import StateSpace

try:  # pragma: no cover - depends on build environment
    from ._filter import BACKEND as _BACKEND
    from ._filter import filter_columns
except ImportError:  # pragma: no cover
    from ._filter_py import BACKEND as _BACKEND
    from ._filter_py import filter_columns

_F_FLOOR = 1e-12
LOG_2PI = float(np.log(2.0 * np.pi))


def backend() -> str:
    return _BACKEND


def _filter(ss: StateSpace, Y: np.ndarray):
    Y = np.ascontiguousarray(Y, dtype=float)
    if Y.ndim == 1:
        Y = Y[:, None]
    nu, F, A = filter_columns(np.ascontiguousarray(ss.transition),
                              np.ascontiguousarray(np.outer(ss.loading,
                                                            ss.loading)),
                              np.ascontiguousarray(ss.initial_cov),
                              Y)
    if not np.all(F > _F_FLOOR):
        raise NumericalDivergence("innovation variance underflow in filter")
    return nu, F, A


def kalman_loglik(ss: StateSpace, y: np.ndarray, sigma2: float = 1.0) -> float:
    """Exact Gaussian log-likelihood via the prediction-error decomposition."""
    y = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(y)):
        raise ValueError("series must be finite")
    nu, F, _ = _filter(ss, y)
    n = len(y)
    return float(-0.5 * n * (LOG_2PI + np.log(sigma2))
                 - 0.5 * np.sum(np.log(F))
                 - 0.5 * np.sum(nu[:, 0] ** 2 / F) / sigma2)


def concentrated_regression(ss: StateSpace, y: np.ndarray,
                            X: np.ndarray) -> tuple[np.ndarray, float, float]:
    """Profile out regression coefficients and sigma2 for y = X b + ARMA error.

    Filters y and every column of X through the shared model; the GLS
    estimate is then weighted least squares on the innovations. Returns
    (b_hat, sigma2_hat, loglik_at_profile).
    """
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    n = len(y)
    k = X.shape[1]
    cols = np.column_stack([y, X]) if k else y[:, None]
    nu, F, _ = _filter(ss, cols)
    nu_y = nu[:, 0]
    if k:
        nu_X = nu[:, 1:]
        w = 1.0 / F
        G = nu_X.T @ (nu_X * w[:, None])
        h = nu_X.T @ (nu_y * w)
        b = np.linalg.solve(G, h)
        resid = nu_y - nu_X @ b
    else:
        b = np.empty(0)
        resid = nu_y
    sigma2 = float(np.sum(resid ** 2 / F) / n)
    if sigma2 <= 0 or not np.isfinite(sigma2):
        raise NumericalDivergence("nonpositive concentrated variance")
    ll = float(-0.5 * n * (LOG_2PI + np.log(sigma2) + 1.0)
               - 0.5 * np.sum(np.log(F)))
    return b, sigma2, ll


def forecast_states(ss: StateSpace, z: np.ndarray, h: int) -> np.ndarray:
    """Mean forecast of the ARMA process z for h steps past its end."""
    _, _, A = _filter(ss, z)
    a = A[:, 0].copy()
    out = np.empty(h)
    T = ss.transition
    for i in range(h):
        out[i] = a[0]
        a = T @ a
    return out
