"""Order/parameter containers, differencing, and polynomial machinery.

Coefficient sign conventions follow the scalar recursion
``y_t = c + sum_j a_j y_{t-j} + eps_t + sum_j b_j eps_{t-j}``:
AR polynomial 1 - sum a_j B^j, MA polynomial 1 + sum b_j B^j.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import TooShort


@dataclass(frozen=True)
class SarimaxOrder:
    p: int = 1
    d: int = 1
    q: int = 1
    P: int = 1
    D: int = 1
    Q: int = 1
    s: int = 24

    def __post_init__(self):
        for name in ("p", "d", "q", "P", "D", "Q"):
            if getattr(self, name) < 0:
                raise ValueError(f"order {name} must be nonnegative")
        if self.s < 1:
            raise ValueError("seasonal period s must be >= 1")

    @property
    def n_arma_params(self) -> int:
        return self.p + self.q + self.P + self.Q

    @property
    def diff_lags(self) -> int:
        return self.d + self.D * self.s


@dataclass(frozen=True)
class SarimaxParams:
    order: SarimaxOrder
    phi: np.ndarray        # nonseasonal AR, length p
    theta: np.ndarray      # nonseasonal MA, length q
    Phi: np.ndarray        # seasonal AR, length P
    Theta: np.ndarray      # seasonal MA, length Q
    beta: np.ndarray       # regressor coefficients, one per exog column
    c: float               # intercept of the differenced regression
    sigma2: float
    exog_columns: tuple[str, ...] = ()

    def to_json(self) -> str:
        doc = {
            "order": [self.order.p, self.order.d, self.order.q,
                      self.order.P, self.order.D, self.order.Q, self.order.s],
            "phi": list(map(float, self.phi)),
            "theta": list(map(float, self.theta)),
            "Phi": list(map(float, self.Phi)),
            "Theta": list(map(float, self.Theta)),
            "beta": list(map(float, self.beta)),
            "c": self.c,
            "sigma2": self.sigma2,
            "exog_columns": list(self.exog_columns),
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "SarimaxParams":
        doc = json.loads(text)
        o = doc["order"]
        return cls(order=SarimaxOrder(*o),
                   phi=np.array(doc["phi"]), theta=np.array(doc["theta"]),
                   Phi=np.array(doc["Phi"]), Theta=np.array(doc["Theta"]),
                   beta=np.array(doc["beta"]), c=doc["c"],
                   sigma2=doc["sigma2"],
                   exog_columns=tuple(doc["exog_columns"]))


def difference(y: np.ndarray, d: int, D: int, s: int) -> np.ndarray:
    """Apply (1-B)^d (1-B^s)^D; output shrinks by d + D*s."""
    y = np.asarray(y, dtype=float)
    if len(y) <= d + D * s:
        raise TooShort(f"series of length {len(y)} cannot be differenced "
                       f"d={d}, D={D}, s={s}")
    for _ in range(d):
        y = y[1:] - y[:-1]
    for _ in range(D):
        y = y[s:] - y[:-s]
    return y


def differencing_poly(d: int, D: int, s: int) -> np.ndarray:
    """Coefficients c_j of (1-B)^d (1-B^s)^D by ascending lag, c_0 = 1."""
    poly = np.array([1.0])
    for _ in range(d):
        poly = np.convolve(poly, np.r_[1.0, -1.0])
    for _ in range(D):
        seasonal = np.zeros(s + 1)
        seasonal[0], seasonal[s] = 1.0, -1.0
        poly = np.convolve(poly, seasonal)
    return poly


def undifference(w: np.ndarray, history: np.ndarray, d: int, D: int,
                 s: int) -> np.ndarray:
    """Integrate forecasts of the differenced series back to the original scale.

    ``history`` supplies at least d + D*s trailing original-scale values.
    """
    poly = differencing_poly(d, D, s)
    lags = len(poly) - 1
    if lags == 0:
        return np.asarray(w, dtype=float).copy()
    if len(history) < lags:
        raise TooShort(f"undifference needs {lags} trailing history values")
    buf = list(np.asarray(history, dtype=float)[-lags:])
    out = np.empty(len(w))
    for i, wi in enumerate(w):
        # y_t = w_t - sum_{j>=1} poly[j] * y_{t-j}
        acc = wi
        for j in range(1, lags + 1):
            acc -= poly[j] * buf[-j]
        out[i] = acc
        buf.append(acc)
    return out


def expand_arma(phi, theta, Phi, Theta, s: int) -> tuple[np.ndarray, np.ndarray]:
    """Multiply seasonal and nonseasonal polynomials into flat lag coefficients.

    Returns (a, b): a_j such that the AR part is sum_j a_j y_{t-j}, and b_j the
    MA lag coefficients.
    """
    ar_poly = np.r_[1.0, -np.asarray(phi, dtype=float)]
    sar_poly = np.zeros(len(Phi) * s + 1)
    sar_poly[0] = 1.0
    for i, v in enumerate(np.asarray(Phi, dtype=float), start=1):
        sar_poly[i * s] = -v
    full_ar = np.convolve(ar_poly, sar_poly)

    ma_poly = np.r_[1.0, np.asarray(theta, dtype=float)]
    sma_poly = np.zeros(len(Theta) * s + 1)
    sma_poly[0] = 1.0
    for i, v in enumerate(np.asarray(Theta, dtype=float), start=1):
        sma_poly[i * s] = v
    full_ma = np.convolve(ma_poly, sma_poly)

    a = -full_ar[1:]
    b = full_ma[1:]
    return a, b


def pacf_to_coeffs(pacf: np.ndarray) -> np.ndarray:
    """Durbin-Levinson map from partial autocorrelations in (-1,1) to the
    coefficients of a stationary AR polynomial 1 - sum c_j B^j."""
    pacf = np.asarray(pacf, dtype=float)
    k = len(pacf)
    c = pacf.copy()
    for j in range(1, k):
        head = c[:j].copy()
        c[:j] = head - pacf[j] * head[::-1]
    return c


def coeffs_to_pacf(c: np.ndarray) -> np.ndarray:
    """Inverse of :func:`pacf_to_coeffs` (for warm starts)."""
    c = np.asarray(c, dtype=float).copy()
    k = len(c)
    pacf = np.empty(k)
    for j in range(k - 1, -1, -1):
        r = c[j]
        pacf[j] = r
        if j > 0:
            if abs(1.0 - r * r) < 1e-14:
                r = np.sign(r) * (1 - 1e-10)
            head = c[:j]
            c[:j] = (head + r * head[::-1]) / (1.0 - r * r)
    return pacf


def unconstrained_to_blocks(x: np.ndarray, order: SarimaxOrder):
    """Split an unconstrained vector into stationary/invertible ARMA blocks.

    tanh maps each entry into (-1,1); the PACF transform then guarantees
    stationary AR and invertible MA polynomials by construction.
    """
    x = np.asarray(x, dtype=float)
    o = order
    i = 0
    blocks = []
    for size, is_ma in ((o.p, False), (o.q, True), (o.P, False), (o.Q, True)):
        raw = np.tanh(x[i:i + size])
        i += size
        coef = pacf_to_coeffs(raw) if size else np.empty(0)
        # MA poly 1 + sum b B^j is invertible iff 1 - sum(-b) B^j is stationary
        blocks.append(-coef if is_ma else coef)
    phi, theta, Phi, Theta = blocks
    return phi, theta, Phi, Theta


def blocks_to_unconstrained(phi, theta, Phi, Theta) -> np.ndarray:
    parts = []
    for coef, is_ma in ((phi, False), (theta, True), (Phi, False), (Theta, True)):
        coef = np.asarray(coef, dtype=float)
        if len(coef) == 0:
            continue
        pacf = coeffs_to_pacf(-coef if is_ma else coef)
        pacf = np.clip(pacf, -1 + 1e-9, 1 - 1e-9)
        parts.append(np.arctanh(pacf))
    if not parts:
        return np.empty(0)
    return np.concatenate(parts)
