"""Command-line entry point.

Exit codes: 0 for success (including partial runs, which are flagged in the
manifest), 1 for configuration errors, 2 for runtime failures.
"""
from __future__ import annotations

import os
import sys

import click

from . import ingest, runner
from .config import ExperimentConfig, parse_config
from .errors import AethercastError, ConfigError
from .models import MODEL_NAMES
from .regimes import REGIME_NAMES


def _build_config(config, **flags) -> ExperimentConfig:
    return parse_config(config, overrides=flags)


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(1 if isinstance(exc, ConfigError) else 2)


common_options = [
    click.option("--config", type=click.Path(exists=True), default=None,
                 help="declarative key = value config file"),
    click.option("--csv", default=None, help="local CSV data source"),
    click.option("--lat", type=float, default=None),
    click.option("--lon", type=float, default=None),
    click.option("--start", default=None, help="UTC range start (inclusive)"),
    click.option("--end", default=None, help="UTC range end (exclusive)"),
    click.option("--out", "out_dir", default=None, help="output directory"),
]


def add_options(opts):
    def wrap(fn):
        for opt in reversed(opts):
            fn = opt(fn)
        return fn
    return wrap


@click.group()
def main():
    """Hourly PM2.5 forecasting benchmark: ingest, preprocess, select
    features, run forecasting regimes, and report rolling weekly errors."""


@main.command()
@add_options(common_options)
def fetch(config, **flags):
    """Fetch provider data for the configured range and cache it."""
    try:
        cfg = _build_config(config, **flags)
        frame = runner.load_frame(cfg)
        out = cfg.out_dir
        os.makedirs(out, exist_ok=True)
        path = os.path.join(out, "data.csv")
        ingest.save_csv(frame, path)
        click.echo(f"fetched {len(frame)} hourly rows -> {path}")
    except Exception as exc:
        _fail(exc)


@main.command()
@add_options(common_options)
def prepare(config, **flags):
    """Load, align, and split the data; write the fitted pipeline state."""
    try:
        from .preprocess import fit_pipeline
        from .series import chrono_split

        cfg = _build_config(config, **flags)
        frame = runner.load_frame(cfg)
        split = chrono_split(frame, cfg.split_ratio)
        state = fit_pipeline(split.train, cfg.exog_columns,
                             p_lo=cfg.winsor_lo, p_hi=cfg.winsor_hi,
                             winsorize_target=cfg.winsorize_target)
        os.makedirs(cfg.out_dir, exist_ok=True)
        path = os.path.join(cfg.out_dir, "pipeline_state.json")
        with open(path, "w") as fh:
            fh.write(state.to_json() + "\n")
        click.echo(f"train rows: {len(split.train)}, test rows: "
                   f"{len(split.test)}; pipeline state -> {path}")
    except Exception as exc:
        _fail(exc)


@main.command("select-features")
@add_options(common_options)
def select_features(config, **flags):
    """Rank candidate regressors (Pearson, MI) and run greedy mRMR."""
    try:
        cfg = _build_config(config, **flags)
        out = cfg.out_dir
        rep, selected = runner.select_features(cfg, out)
        click.echo("mi ranking: " + ", ".join(rep.ranking))
        click.echo("mrmr selection: " + ", ".join(selected))
        click.echo(f"pinned experiment set: {cfg.exog}")
    except Exception as exc:
        _fail(exc)


@main.command()
@add_options(common_options)
@click.option("--model", type=click.Choice(MODEL_NAMES), default=None)
@click.option("--regime", type=click.Choice(REGIME_NAMES), default=None)
@click.option("--alpha", type=float, default=None)
@click.option("--seed", type=int, default=None)
def run(config, **flags):
    """Run one (model, regime) pair end to end and emit its report."""
    try:
        cfg = _build_config(config, **flags)
        report, result, paths = runner.run_experiment(cfg)
        status = "partial" if report.partial else "complete"
        click.echo(f"{cfg.model}/{cfg.regime}: {status}, "
                   f"{len(report.scores)} windows, "
                   f"MAE {report.mae:.2f}, RMSE {report.rmse:.2f}")
        if report.partial:
            click.echo(f"stopped at week {report.failed_week}: "
                       f"{result.error}", err=True)
        click.echo(f"report -> {paths['manifest']}")
    except Exception as exc:
        _fail(exc)


@main.command()
@click.option("--run-dir", type=click.Path(exists=True), required=True,
              help="existing run directory with forecasts.csv")
def report(run_dir):
    """Re-emit scores and the best/worst-week plot from a run's forecasts."""
    try:
        import csv as _csv

        import numpy as np

        from .report import aggregate, score_window, emit_report
        from .regimes import ForecastRecord
        from .series import WeekWindow

        weeks: dict[int, dict] = {}
        with open(os.path.join(run_dir, "forecasts.csv")) as fh:
            for row in _csv.DictReader(fh):
                w = int(row["week"])
                d = weeks.setdefault(w, {"actual": [], "base": [],
                                         "corrected": [], "bias": 0.0})
                d["actual"].append(float(row["actual"]))
                d["base"].append(float(row["base_pred"]))
                d["corrected"].append(float(row["corrected_pred"]))
                d["bias"] = float(row["bias"])
        records = []
        for w in sorted(weeks):
            d = weeks[w]
            actual = np.array(d["actual"])
            base = np.array(d["base"])
            records.append(ForecastRecord(
                week=WeekWindow(index=w, start=None, rows=None),
                base_pred=base, corrected_pred=np.array(d["corrected"]),
                actual=actual, residuals=actual - base,
                model_tag="", regime_tag="", bias=d["bias"]))
        scores = [score_window(r.actual, r.corrected_pred, week=r.week.index)
                  for r in records]
        rep = aggregate(scores, records=records)
        emit_report(rep, records, run_dir)
        click.echo(f"re-emitted report for {len(scores)} windows in {run_dir}")
    except Exception as exc:
        _fail(exc)


@main.command()
@add_options(common_options)
@click.option("--alpha", type=float, default=None)
@click.option("--seed", type=int, default=None)
def bench(config, **flags):
    """Run the full 3-model x 2-regime matrix and print a comparison table."""
    try:
        cfg = _build_config(config, **flags)
        frame = runner.load_frame(cfg)
        rows = []
        for model in MODEL_NAMES:
            for regime in ("walkforward", "frozen-corrected"):
                cell = parse_config(None, overrides={
                    **{k: v for k, v in cfg.__dict__.items()},
                    "model": model, "regime": regime,
                })
                out = os.path.join(cfg.out_dir, f"{model}_{regime}")
                rep, result, _ = runner.run_experiment(cell, out_dir=out,
                                                       frame=frame)
                rows.append((model, regime, rep.mae, rep.rmse,
                             rep.wall_seconds, rep.partial))
        click.echo(f"{'model':<10} {'regime':<18} {'MAE':>8} {'RMSE':>8} "
                   f"{'secs':>8} partial")
        for model, regime, mae, rmse, secs, partial in rows:
            click.echo(f"{model:<10} {regime:<18} {mae:>8.2f} {rmse:>8.2f} "
                       f"{secs:>8.1f} {partial}")
    except Exception as exc:
        _fail(exc)


if __name__ == "__main__":
    main()
