"""Rolling-protocol scoring, aggregation, and report emission.

Aggregate MAE/RMSE are unweighted means of per-window values (pooled RMSE
over all hours is also emitted for transparency). MAPE/SMAPE are
deliberately absent: they degenerate when concentrations approach zero.
"""
from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyRun, LengthMismatch, NonFinite
from .regimes import ForecastRecord, RegimeResult


@dataclass(frozen=True)
class WindowScore:
    week: int
    mae: float
    rmse: float
    n: int


@dataclass(frozen=True)
class RunReport:
    scores: list[WindowScore]
    mae: float
    rmse: float
    pooled_rmse: float
    best_week: WindowScore
    worst_week: WindowScore
    model_tag: str = ""
    regime_tag: str = ""
    partial: bool = False
    failed_week: int | None = None
    wall_seconds: float = 0.0
    metadata: dict = field(default_factory=dict)


def score_window(actual: np.ndarray, pred: np.ndarray,
                 week: int = 1) -> WindowScore:
    actual = np.asarray(actual, dtype=float)
    pred = np.asarray(pred, dtype=float)
    if actual.shape != pred.shape:
        raise LengthMismatch(f"{actual.shape} vs {pred.shape}")
    if not (np.all(np.isfinite(actual)) and np.all(np.isfinite(pred))):
        raise NonFinite("scores require finite inputs")
    err = actual - pred
    return WindowScore(week=week,
                       mae=float(np.mean(np.abs(err))),
                       rmse=float(np.sqrt(np.mean(err ** 2))),
                       n=len(err))


def aggregate(scores: list[WindowScore], records: list[ForecastRecord] | None = None,
              **meta) -> RunReport:
    """Unweighted means of window metrics; best/worst by MAE, earliest wins ties."""
    if not scores:
        raise EmptyRun("no windows to aggregate")
    mae = float(np.mean([s.mae for s in scores]))
    rmse = float(np.mean([s.rmse for s in scores]))
    if records:
        err = np.concatenate([r.actual - r.corrected_pred for r in records])
        pooled = float(np.sqrt(np.mean(err ** 2)))
    else:
        pooled = rmse
    best = min(scores, key=lambda s: (s.mae, s.week))
    worst = max(scores, key=lambda s: (s.mae, -s.week))
    return RunReport(scores=list(scores), mae=mae, rmse=rmse,
                     pooled_rmse=pooled, best_week=best, worst_week=worst,
                     **meta)


def score_result(result: RegimeResult, model_tag: str = "",
                 regime_tag: str = "", wall_seconds: float = 0.0,
                 metadata: dict | None = None) -> RunReport:
    """Score each week's corrected predictions and aggregate."""
    scores = [score_window(r.actual, r.corrected_pred, week=r.week.index)
              for r in result.records]
    return aggregate(scores, records=result.records,
                     model_tag=model_tag or (result.records[0].model_tag
                                             if result.records else ""),
                     regime_tag=regime_tag or (result.records[0].regime_tag
                                               if result.records else ""),
                     partial=result.partial, failed_week=result.failed_week,
                     wall_seconds=wall_seconds, metadata=metadata or {})


def emit_report(report: RunReport, records: list[ForecastRecord],
                out_dir, write_plot: bool = True) -> dict[str, str]:
    """Write scores.csv, forecasts.csv, manifest.json, and best/worst plot."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {}

    scores_path = os.path.join(out_dir, "scores.csv")
    with open(scores_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["week", "mae", "rmse"])
        for s in report.scores:
            w.writerow([s.week, f"{s.mae:.6f}", f"{s.rmse:.6f}"])
    paths["scores"] = scores_path

    fc_path = os.path.join(out_dir, "forecasts.csv")
    with open(fc_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["week", "hour", "actual", "base_pred", "corrected_pred",
                    "bias"])
        for r in records:
            for hour in range(len(r.actual)):
                w.writerow([r.week.index, hour,
                            f"{r.actual[hour]:.6f}",
                            f"{r.base_pred[hour]:.6f}",
                            f"{r.corrected_pred[hour]:.6f}",
                            f"{r.bias:.6f}"])
    paths["forecasts"] = fc_path

    manifest = {
        "model": report.model_tag,
        "regime": report.regime_tag,
        "aggregate_mae": report.mae,
        "aggregate_rmse": report.rmse,
        "pooled_rmse": report.pooled_rmse,
        "best_week": report.best_week.week,
        "best_week_mae": report.best_week.mae,
        "worst_week": report.worst_week.week,
        "worst_week_mae": report.worst_week.mae,
        "n_windows": len(report.scores),
        "partial": report.partial,
        "failed_week": report.failed_week,
        "wall_seconds": report.wall_seconds,
        **report.metadata,
    }
    manifest_path = os.path.join(out_dir, "manifest.json")
    with open(manifest_path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    paths["manifest"] = manifest_path

    if write_plot:
        paths["plot"] = _plot_best_worst(report, records, out_dir)
    return paths


def _plot_best_worst(report: RunReport, records, out_dir) -> str:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    by_week = {r.week.index: r for r in records}
    fig, axes = plt.subplots(2, 1, figsize=(10, 7), sharex=True)
    for ax, score, label in ((axes[0], report.best_week, "best"),
                             (axes[1], report.worst_week, "worst")):
        r = by_week[score.week]
        hours = np.arange(len(r.actual))
        ax.plot(hours, r.actual, label="actual", color="black", lw=1.0)
        ax.plot(hours, r.corrected_pred, label="predicted", color="tab:red",
                lw=1.0)
        ax.set_title(f"{label} week (week {score.week}, "
                     f"MAE {score.mae:.2f})")
        ax.set_ylabel("PM2.5 (ug/m3)")
        ax.legend(loc="upper right")
    axes[1].set_xlabel("hour of week")
    fig.tight_layout()
    path = os.path.join(out_dir, "best_worst.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
