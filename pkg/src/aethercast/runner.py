"""End-to-end experiment orchestration shared by the CLI subcommands."""
from __future__ import annotations

import os
import time

import pandas as pd

from . import featsel, ingest
from .additive import AdditiveConfig
from .arnet import ArNetConfig
from .config import ExperimentConfig
from .models import make_forecaster
from .regimes import (KalmanBias, PrepSpec, RegimeResult, run_frozen,
                      run_frozen_corrected, run_walk_forward)
from .report import RunReport, emit_report, score_result
from .sarimax import SarimaxOrder
from .series import HourlyFrame, chrono_split, weekly_windows


def load_frame(cfg: ExperimentConfig, transport=None) -> HourlyFrame:
    """CSV path when given, otherwise fetch both providers and merge."""
    if cfg.csv:
        return ingest.load_csv(cfg.csv)
    if cfg.lat is None or cfg.lon is None or not cfg.start or not cfg.end:
        raise ValueError("fetch source needs lat, lon, start, and end")
    src = ingest.SourceConfig(latitude=cfg.lat, longitude=cfg.lon,
                              start=pd.Timestamp(cfg.start, tz="UTC"),
                              end=pd.Timestamp(cfg.end, tz="UTC"),
                              cache_dir=cfg.cache_dir)
    pollution = ingest.fetch_air_pollution(src, transport=transport)
    meteo = ingest.fetch_meteo(src, transport=transport)
    return ingest.merge_align([pollution, meteo])


def model_factory(cfg: ExperimentConfig):
    name = cfg.model

    def make():
        if name == "sarimax":
            p, d, q, P, D, Q, s = cfg.sarimax_order_tuple()
            return make_forecaster(
                "sarimax",
                sarimax_order=SarimaxOrder(p=p, d=d, q=q, P=P, D=D, Q=Q, s=s))
        if name == "additive":
            return make_forecaster(
                "additive",
                additive_cfg=AdditiveConfig(n_changepoints=cfg.n_changepoints))
        return make_forecaster(
            "arnet",
            arnet_cfg=ArNetConfig(epochs=cfg.epochs,
                                  batch_size=cfg.batch_size,
                                  learning_rate=cfg.learning_rate,
                                  seed=cfg.seed))
    return make


def run_experiment(cfg: ExperimentConfig, out_dir: str | None = None,
                   frame: HourlyFrame | None = None,
                   write_plot: bool = True):
    """Prepare, run one (model, regime) pair, and emit the report files."""
    t_start = time.perf_counter()
    if frame is None:
        frame = load_frame(cfg)
    split = chrono_split(frame, cfg.split_ratio)
    windows = weekly_windows(split.test)
    prep = PrepSpec(exog_columns=tuple(cfg.exog_columns),
                    p_lo=cfg.winsor_lo, p_hi=cfg.winsor_hi,
                    winsorize_target=cfg.winsorize_target)
    make = model_factory(cfg)

    if cfg.regime == "walkforward":
        result = run_walk_forward(make, split, windows, prep)
    elif cfg.regime == "frozen":
        result = run_frozen(make, split, windows, prep)
    else:
        kb = KalmanBias() if cfg.bias_update == "kalman" else None
        result = run_frozen_corrected(make, split, windows, prep,
                                      alpha=cfg.alpha, kalman_bias=kb)

    wall = time.perf_counter() - t_start
    report = score_result(result, model_tag=cfg.model, regime_tag=cfg.regime,
                          wall_seconds=wall, metadata=cfg.manifest_dict())
    out = out_dir or os.path.join(cfg.out_dir, f"{cfg.model}_{cfg.regime}")
    paths = emit_report(report, result.records, out, write_plot=write_plot)
    return report, result, paths


def select_features(cfg: ExperimentConfig, out_dir: str,
                    frame: HourlyFrame | None = None):
    """Training-segment relevance report plus greedy mRMR ranking."""
    if frame is None:
        frame = load_frame(cfg)
    split = chrono_split(frame, cfg.split_ratio)
    target = frame.target_name
    candidates = [c for c in split.train.columns if c != target]
    if not cfg.include_pm10 and "pm10" in candidates:
        candidates.remove("pm10")
    rep = featsel.relevance_report(split.train, target, candidates,
                                   bins=cfg.mi_bins)
    selected = featsel.mrmr_select(split.train, target,
                                   k=min(cfg.mrmr_k, len(candidates)),
                                   candidates=candidates)
    os.makedirs(out_dir, exist_ok=True)
    rep.to_csv(os.path.join(out_dir, "relevance.csv"))
    featsel.plot_relevance(rep, os.path.join(out_dir, "relevance.png"))
    with open(os.path.join(out_dir, "mrmr_selected.txt"), "w") as fh:
        fh.write("\n".join(selected) + "\n")
    return rep, selected
