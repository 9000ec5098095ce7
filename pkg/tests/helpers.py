"""Shared fixtures and oracles for the test suite."""
from __future__ import annotations

import numpy as np
import pandas as pd

from aethercast.models import Forecaster
from aethercast.series import HourlyFrame


def hourly_index(n: int, start: str = "2023-01-01") -> pd.DatetimeIndex:
    return pd.date_range(start, periods=n, freq="h", tz="UTC")


def make_frame(n: int = 500,
               columns=("pm2_5", "no", "no2", "co", "so2"),
               seed: int = 0, start: str = "2023-01-01") -> HourlyFrame:
    """Synthetic hourly frame with mild daily structure per column."""
    rng = np.random.default_rng(seed)
    idx = hourly_index(n, start)
    t = np.arange(n)
    data = {}
    for j, c in enumerate(columns):
        base = 40.0 + 2.0 * j + 10.0 * np.sin(2 * np.pi * (t + 7 * j) / 24)
        data[c] = base + rng.normal(0.0, 5.0, n)
    return HourlyFrame(pd.DataFrame(data, index=idx))


def simulate_arma(n: int, phi=(), theta=(), sigma: float = 1.0,
                  seed: int = 0, burn: int = 300) -> np.ndarray:
    """Direct scalar ARMA recursion with a burn-in, zero pre-sample values."""
    rng = np.random.default_rng(seed)
    p, q = len(phi), len(theta)
    total = n + burn
    e = rng.normal(0.0, sigma, total)
    y = np.zeros(total)
    for t in range(total):
        acc = e[t]
        for j in range(1, p + 1):
            if t - j >= 0:
                acc += phi[j - 1] * y[t - j]
        for j in range(1, q + 1):
            if t - j >= 0:
                acc += theta[j - 1] * e[t - j]
        y[t] = acc
    return y[burn:]


def arma11_loglik_dense(y: np.ndarray, phi: float, theta: float,
                        sigma2: float = 1.0) -> float:
    """Gaussian log-density of an ARMA(1,1) draw via its dense Toeplitz
    autocovariance matrix (independent of any filtering code)."""
    n = len(y)
    g0 = sigma2 * (1 + 2 * phi * theta + theta ** 2) / (1 - phi ** 2)
    g1 = sigma2 * (1 + phi * theta) * (phi + theta) / (1 - phi ** 2)
    gammas = np.empty(n)
    gammas[0] = g0
    if n > 1:
        gammas[1] = g1
        for k in range(2, n):
            gammas[k] = phi * gammas[k - 1]
    cov = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            cov[i, j] = gammas[abs(i - j)]
    sign, logdet = np.linalg.slogdet(cov)
    assert sign > 0
    quad = float(y @ np.linalg.solve(cov, y))
    return float(-0.5 * (n * np.log(2 * np.pi) + logdet + quad))


class OffsetOracle(Forecaster):
    """Test stub: predicts the window's actual values plus a fixed offset.

    An offset of 0 is a perfect model; a negative offset gives a base model
    with a constant positive residual, which makes the bias-correction
    recursion analytically checkable.
    """

    name = "offset-oracle"

    def __init__(self, offset: float = 0.0):
        self.offset = offset
        self.n_fits = 0
        self.train_sizes: list[int] = []

    def fit(self, train, exog_columns):
        self.n_fits += 1
        self.train_sizes.append(len(train))

    def forecast(self, view):
        return view.window.rows.target + self.offset


class FailingModel(Forecaster):
    """Test stub that raises on the fit of a chosen week."""

    name = "failing"

    def __init__(self, fail_on_fit: int, counter: dict):
        self.fail_on_fit = fail_on_fit
        self.counter = counter

    def fit(self, train, exog_columns):
        self.counter["fits"] = self.counter.get("fits", 0) + 1
        if self.counter["fits"] == self.fail_on_fit:
            raise RuntimeError("synthetic model failure")

    def forecast(self, view):
        return np.zeros(len(view.window.rows))
