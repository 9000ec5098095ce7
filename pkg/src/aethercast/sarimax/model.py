"""Maximum-likelihood fitting and direct multi-step forecasting.

The model is regression with SARIMA errors: after differencing, the target
minus ``c + X beta`` follows an ARMA process whose exact Gaussian likelihood
is evaluated by the Kalman filter. beta, c, and sigma2 are concentrated out
of the objective, so the optimizer only searches the ARMA blocks in an
unconstrained (PACF-transformed) space that enforces stationarity and
invertibility by construction.
"""
from __future__ import annotations

import numpy as np
from scipy.optimize import minimize

from ..errors import DimensionMismatch, NonFiniteObjective, OptimizerFailure, TooShort
from . import kalman
from .orders import (SarimaxOrder, SarimaxParams, blocks_to_unconstrained,
                     difference, expand_arma, unconstrained_to_blocks,
                     undifference)
from .statespace import build_statespace

_PENALTY = 1e10


def _differenced_design(y, exog, order, include_intercept):
    yd = difference(y, order.d, order.D, order.s)
    cols = []
    if include_intercept:
        cols.append(np.ones(len(yd)))
    if exog is not None and exog.shape[1]:
        for j in range(exog.shape[1]):
            cols.append(difference(exog[:, j], order.d, order.D, order.s))
    X = np.column_stack(cols) if cols else np.empty((len(yd), 0))
    return yd, X


def _statespace_for(x, order):
    phi, theta, Phi, Theta = unconstrained_to_blocks(x, order)
    a, b = expand_arma(phi, theta, Phi, Theta, order.s)
    return build_statespace(a, b), (phi, theta, Phi, Theta)


def fit_sarimax(train_y: np.ndarray, train_exog: np.ndarray | None,
                order: SarimaxOrder = SarimaxOrder(),
                include_intercept: bool = True,
                start: SarimaxParams | None = None,
                exog_columns: tuple[str, ...] = (),
                maxiter: int = 500) -> SarimaxParams:
    """Numerical MLE: simplex search refined by quasi-Newton steps."""
    y = np.asarray(train_y, dtype=float)
    exog = None if train_exog is None else np.asarray(train_exog, dtype=float)
    if exog is not None and exog.ndim == 1:
        exog = exog[:, None]
    if exog is not None and len(exog) != len(y):
        raise DimensionMismatch("exog and target lengths differ")
    n_min = order.diff_lags + order.n_arma_params + 10
    if len(y) < n_min:
        raise TooShort(f"need at least {n_min} observations for this order")

    yd, X = _differenced_design(y, exog, order, include_intercept)

    def objective(x):
        try:
            ss, _ = _statespace_for(x, order)
            _, _, ll = kalman.concentrated_regression(ss, yd, X)
        except Exception:
            return _PENALTY
        if not np.isfinite(ll):
            return _PENALTY
        return -ll

    k = order.n_arma_params
    if k:
        if start is not None:
            x0 = blocks_to_unconstrained(start.phi, start.theta,
                                         start.Phi, start.Theta)
        else:
            x0 = np.zeros(k)
        f0 = objective(x0)
        if f0 >= _PENALTY:
            x0 = np.zeros(k)
            f0 = objective(x0)
        if f0 >= _PENALTY:
            raise NonFiniteObjective("objective not finite at starting point")
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"maxiter": maxiter, "fatol": 1e-8,
                                "xatol": 1e-6})
        res2 = minimize(objective, res.x, method="L-BFGS-B",
                        options={"maxiter": maxiter, "ftol": 1e-10})
        x_best = res2.x if res2.fun <= res.fun else res.x
        f_best = min(res.fun, res2.fun)
        if f_best >= _PENALTY:
            raise OptimizerFailure("no improving step found")
        if f_best > f0 + 1e-9:
            x_best, f_best = x0, f0
    else:
        x_best = np.empty(0)

    ss, (phi, theta, Phi, Theta) = _statespace_for(x_best, order)
    b, sigma2, _ = kalman.concentrated_regression(ss, yd, X)
    if include_intercept:
        c = float(b[0]) if len(b) else 0.0
        beta = b[1:]
    else:
        c = 0.0
        beta = b
    return SarimaxParams(order=order, phi=phi, theta=theta, Phi=Phi,
                         Theta=Theta, beta=np.asarray(beta), c=c,
                         sigma2=sigma2, exog_columns=tuple(exog_columns))


def forecast_sarimax(params: SarimaxParams, history_y: np.ndarray,
                     history_exog: np.ndarray | None,
                     future_exog: np.ndarray | None,
                     h: int = 168) -> np.ndarray:
    """Mean forecast: ARMA state iterated with zero future innovations,
    regression term added back, differencing inverted from trailing history."""
    o = params.order
    y = np.asarray(history_y, dtype=float)
    n_beta = len(params.beta)
    if n_beta:
        if future_exog is None or history_exog is None:
            raise DimensionMismatch("fitted regressors require exog inputs")
        hist_x = np.asarray(history_exog, dtype=float)
        fut_x = np.asarray(future_exog, dtype=float)
        if fut_x.ndim == 1:
            fut_x = fut_x[:, None]
        if hist_x.ndim == 1:
            hist_x = hist_x[:, None]
        if fut_x.shape != (h, n_beta):
            raise DimensionMismatch(
                f"future exog shape {fut_x.shape} != ({h}, {n_beta})")
        all_x = np.vstack([hist_x, fut_x])
        xd = np.column_stack([difference(all_x[:, j], o.d, o.D, o.s)
                              for j in range(n_beta)])
        xd_hist, xd_fut = xd[:-h], xd[-h:]
        reg_hist = xd_hist @ params.beta
        reg_fut = xd_fut @ params.beta
    else:
        reg_hist = 0.0
        reg_fut = np.zeros(h)

    yd = difference(y, o.d, o.D, o.s)
    z = yd - params.c - reg_hist

    a, b = expand_arma(params.phi, params.theta, params.Phi, params.Theta, o.s)
    ss = build_statespace(a, b)
    zhat = kalman.forecast_states(ss, z, h)
    w_hat = params.c + reg_fut + zhat
    return undifference(w_hat, y, o.d, o.D, o.s)
