"""Experiment configuration: declarative key=value files plus flag overrides.

Unknown keys are rejected; every value lands in the run manifest so a run
directory fully documents its experiment.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields

from .errors import InvalidValue, UnknownKey
from .models import MODEL_NAMES
from .regimes import REGIME_NAMES


@dataclass
class ExperimentConfig:
    # data source: either a csv path or fetch coordinates + range
    csv: str = ""
    lat: float | None = None
    lon: float | None = None
    start: str = ""
    end: str = ""
    cache_dir: str = ".aethercast_cache"

    split_ratio: float = 0.9
    winsor_lo: float = 0.01
    winsor_hi: float = 0.99
    winsorize_target: bool = True
    exog: str = "no,no2,co,so2"
    include_pm10: bool = False   # PM10 excluded from selector candidates by default

    model: str = "additive"
    regime: str = "frozen-corrected"
    alpha: float = 0.3
    bias_update: str = "ewma"    # or "kalman"
    seed: int = 0
    out_dir: str = "runs"

    # SARIMAX
    sarimax_order: str = "1,1,1,1,1,1,24"
    sarimax_intercept: bool = True

    # additive model
    n_changepoints: int = 25

    # AR-net
    epochs: int = 30
    batch_size: int = 128
    learning_rate: float = 0.001

    # feature selection
    mi_bins: int = 10
    mrmr_k: int = 4

    @property
    def exog_columns(self) -> list[str]:
        return [c.strip() for c in self.exog.split(",") if c.strip()]

    def validate(self) -> "ExperimentConfig":
        if not 0.0 < self.split_ratio < 1.0:
            raise InvalidValue("split_ratio", self.split_ratio,
                              "must lie in (0,1)")
        if not 0.0 <= self.winsor_lo < self.winsor_hi <= 1.0:
            raise InvalidValue("winsor_lo/winsor_hi",
                               (self.winsor_lo, self.winsor_hi),
                               "need 0 <= lo < hi <= 1")
        if not 0.0 < self.alpha < 1.0:
            raise InvalidValue("alpha", self.alpha, "must lie in (0,1)")
        if self.model not in MODEL_NAMES:
            raise InvalidValue("model", self.model,
                               f"expected one of {MODEL_NAMES}")
        if self.regime not in REGIME_NAMES:
            raise InvalidValue("regime", self.regime,
                               f"expected one of {REGIME_NAMES}")
        if self.bias_update not in ("ewma", "kalman"):
            raise InvalidValue("bias_update", self.bias_update,
                               "expected 'ewma' or 'kalman'")
        try:
            order = [int(v) for v in self.sarimax_order.split(",")]
        except ValueError:
            order = []
        if len(order) != 7 or any(v < 0 for v in order) or order[6] < 1:
            raise InvalidValue("sarimax_order", self.sarimax_order,
                               "expected 'p,d,q,P,D,Q,s'")
        for key in ("epochs", "batch_size", "mi_bins", "mrmr_k"):
            if getattr(self, key) <= 0:
                raise InvalidValue(key, getattr(self, key), "must be positive")
        if self.learning_rate <= 0:
            raise InvalidValue("learning_rate", self.learning_rate,
                               "must be positive")
        return self

    def sarimax_order_tuple(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.sarimax_order.split(","))

    def manifest_dict(self) -> dict:
        return {f"config_{k}": v for k, v in asdict(self).items()}


_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def _coerce(key: str, raw: str):
    if key not in _FIELD_TYPES:
        raise UnknownKey(key)
    ftype = _FIELD_TYPES[key]
    raw = raw.strip()
    try:
        if ftype == "bool":
            if raw.lower() in ("true", "1", "yes"):
                return True
            if raw.lower() in ("false", "0", "no"):
                return False
            raise ValueError("not a boolean")
        if ftype == "int":
            return int(raw)
        if ftype == "float":
            return float(raw)
        if ftype == "float | None":
            return None if raw.lower() in ("", "none") else float(raw)
        return raw
    except ValueError as exc:
        raise InvalidValue(key, raw, str(exc)) from exc


def parse_config(path: str | None = None,
                 overrides: dict | None = None) -> ExperimentConfig:
    """Defaults, then file values, then flag overrides; validated last."""
    cfg = ExperimentConfig()
    if path:
        with open(path) as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise InvalidValue(f"line {lineno}", line,
                                       "expected 'key = value'")
                key, raw = line.split("=", 1)
                key = key.strip()
                setattr(cfg, key, _coerce(key, raw))
    for key, value in (overrides or {}).items():
        if value is None:
            continue
        if key not in _FIELD_TYPES:
            raise UnknownKey(key)
        setattr(cfg, key, value)
    return cfg.validate()
