"""Pure-numpy Kalman filter kernel (fallback when the Cython build is absent).

Runs the shared covariance recursion once and propagates one state vector
per data column, so regression columns are filtered at marginal cost.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"


def filter_columns(T: np.ndarray, RRt: np.ndarray, P0: np.ndarray,
                   Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Filter each column of Y through the same state-space model.

    Returns (nu, F, A): per-column innovations (n, m), the shared innovation
    variances (n,) for unit state noise, and the one-step-ahead predicted
    state vectors (r, m) after the last observation.
    """
    n, m = Y.shape
    r = T.shape[0]
    P = P0.copy()
    A = np.zeros((r, m))
    nu = np.empty((n, m))
    F = np.empty(n)
    for t in range(n):
        f = P[0, 0]
        F[t] = f
        nu[t] = Y[t] - A[0]
        TP = T @ P
        M = TP[:, 0]
        A = T @ A + np.outer(M / f, nu[t]) if f > 0 else T @ A
        P = TP @ T.T - np.outer(M, M) / f + RRt if f > 0 else TP @ T.T + RRt
        P = (P + P.T) / 2.0
    return nu, F, A
