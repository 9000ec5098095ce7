"""SARIMAX engine: state-space Kalman likelihood, MLE, direct 168-step forecasts."""

from .kalman import backend, concentrated_regression, kalman_loglik
from .model import fit_sarimax, forecast_sarimax
from .orders import SarimaxOrder, SarimaxParams, difference, undifference
from .statespace import StateSpace, build_statespace

__all__ = [
    "SarimaxOrder", "SarimaxParams", "StateSpace", "backend",
    "build_statespace", "concentrated_regression", "difference",
    "fit_sarimax", "forecast_sarimax", "kalman_loglik", "undifference",
]
