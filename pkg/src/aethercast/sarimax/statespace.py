"""Harvey state-space representation of an ARMA process.

State recursion: alpha_{t+1} = T alpha_t + R eps_{t+1}, observation
y_t = alpha_t[0]. The stationary initial covariance solves the discrete
Lyapunov equation P = T P T' + sigma2 R R'.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_discrete_lyapunov


@dataclass(frozen=True)
class StateSpace:
    transition: np.ndarray     # T, (r, r)
    loading: np.ndarray        # R, (r,)
    initial_cov: np.ndarray    # stationary P0 for unit innovation variance

    @property
    def state_dim(self) -> int:
        return self.transition.shape[0]


def build_statespace(a: np.ndarray, b: np.ndarray) -> StateSpace:
    """Assemble the companion form for flat AR lags ``a`` and MA lags ``b``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    r = max(len(a), len(b) + 1, 1)
    T = np.zeros((r, r))
    T[:len(a), 0] = a
    for i in range(r - 1):
        T[i, i + 1] = 1.0
    R = np.zeros(r)
    R[0] = 1.0
    R[1:len(b) + 1] = b
    RRt = np.outer(R, R)
    P0 = solve_discrete_lyapunov(T, RRt)
    P0 = (P0 + P0.T) / 2.0
    return StateSpace(transition=T, loading=R, initial_cov=P0)
