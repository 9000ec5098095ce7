"""Data acquisition: pollutant and meteorological providers, local CSV, and
merge/alignment into one hourly frame.

Raw provider payloads are cached on disk before parsing, keyed by a hash of
(provider, coordinates, range), so repeated runs are byte-reproducible and
network tests stay optional. Cache writes are atomic (write-temp-then-rename).
"""
from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from functools import reduce

import numpy as np
import pandas as pd

from .errors import (ColumnCollision, EmptyIntersection, HttpError, ParseError,
                     RangeEmpty, SchemaError)
from .series import HourlyFrame, enforce_hourly_grid

API_KEY_ENV = "AETHERCAST_OWM_KEY"

POLLUTANT_COLUMNS = ["pm2_5", "pm10", "co", "no", "no2", "so2", "o3", "nh3"]
METEO_COLUMNS = ["temperature", "dew_point"]
CSV_COLUMNS = POLLUTANT_COLUMNS + METEO_COLUMNS
CSV_HEADER = "timestamp," + ",".join(CSV_COLUMNS)

OWM_URL = "https://api.openweathermap.org/data/2.5/air_pollution/history"
OPEN_METEO_URL = "https://archive-api.open-meteo.com/v1/archive"


@dataclass(frozen=True)
class SourceConfig:
    latitude: float
    longitude: float
    start: pd.Timestamp
    end: pd.Timestamp
    api_key: str | None = None
    cache_dir: str = ".aethercast_cache"

    def __post_init__(self):
        if not -90.0 <= self.latitude <= 90.0:
            raise ValueError(f"latitude {self.latitude} out of range")
        if not -180.0 <= self.longitude <= 180.0:
            raise ValueError(f"longitude {self.longitude} out of range")
        if self.start >= self.end:
            raise ValueError("start must precede end")


def _default_transport(url: str, params: dict) -> bytes:
    import requests

    resp = requests.get(url, params=params, timeout=60)
    if resp.status_code != 200:
        raise HttpError(resp.status_code, url)
    return resp.content


def _cache_key(provider: str, cfg: SourceConfig) -> str:
    raw = (f"{provider}|{cfg.latitude:.4f}|{cfg.longitude:.4f}"
           f"|{cfg.start.isoformat()}|{cfg.end.isoformat()}")
    return hashlib.sha256(raw.encode()).hexdigest()


def _cached_fetch(provider: str, cfg: SourceConfig, url: str, params: dict,
                  transport=None) -> bytes:
    os.makedirs(cfg.cache_dir, exist_ok=True)
    path = os.path.join(cfg.cache_dir, _cache_key(provider, cfg))
    if os.path.exists(path):
        with open(path, "rb") as fh:
            return fh.read()
    payload = (transport or _default_transport)(url, params)
    fd, tmp = tempfile.mkstemp(dir=cfg.cache_dir)
    with os.fdopen(fd, "wb") as fh:
        fh.write(payload)
    os.replace(tmp, path)
    return payload


def _expected_index(cfg: SourceConfig) -> pd.DatetimeIndex:
    return pd.date_range(cfg.start, cfg.end, freq="h", tz="UTC",
                         inclusive="left")


def fetch_air_pollution(cfg: SourceConfig, transport=None) -> HourlyFrame:
    """Hourly pollutant concentrations from the air-pollution provider."""
    key = cfg.api_key or os.environ.get(API_KEY_ENV)
    if not key:
        raise ValueError(f"air-pollution API key missing: pass api_key or "
                         f"set the {API_KEY_ENV} environment variable")
    params = {
        "lat": cfg.latitude, "lon": cfg.longitude,
        "start": int(cfg.start.timestamp()), "end": int(cfg.end.timestamp()),
        "appid": key,
    }
    payload = _cached_fetch("air_pollution", cfg, OWM_URL, params, transport)
    try:
        doc = json.loads(payload)
        entries = doc["list"]
    except (json.JSONDecodeError, KeyError) as exc:
        raise SchemaError(f"malformed air-pollution payload: {exc}") from exc
    rows = {}
    for entry in entries:
        try:
            ts = pd.Timestamp(entry["dt"], unit="s", tz="UTC")
            comp = entry["components"]
            rows[ts] = [float(comp[c]) for c in POLLUTANT_COLUMNS]
        except KeyError as exc:
            raise SchemaError(f"missing pollutant field {exc}") from exc
    idx = _expected_index(cfg)
    missing = [t for t in idx if t not in rows]
    if len(missing) == len(idx):
        raise RangeEmpty("provider returned no rows in range")
    if missing:
        raise SchemaError(f"provider response missing hour {missing[0]}")
    df = pd.DataFrame([rows[t] for t in idx], index=idx,
                      columns=POLLUTANT_COLUMNS)
    return enforce_hourly_grid(df)


def fetch_meteo(cfg: SourceConfig, transport=None) -> HourlyFrame:
    """Hourly temperature and dew point from the meteorological provider."""
    params = {
        "latitude": cfg.latitude, "longitude": cfg.longitude,
        "start_date": cfg.start.strftime("%Y-%m-%d"),
        "end_date": (cfg.end - pd.Timedelta(hours=1)).strftime("%Y-%m-%d"),
        "hourly": "temperature_2m,dew_point_2m",
        "timezone": "UTC",
    }
    payload = _cached_fetch("meteo", cfg, OPEN_METEO_URL, params, transport)
    try:
        doc = json.loads(payload)
        hourly = doc["hourly"]
        times = pd.DatetimeIndex(pd.to_datetime(hourly["time"], utc=True))
        temp = hourly["temperature_2m"]
        dew = hourly["dew_point_2m"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise SchemaError(f"malformed meteo payload: {exc}") from exc
    if len(times) != len(temp) or len(times) != len(dew):
        raise SchemaError("meteo arrays have inconsistent lengths")
    if len(times) >= 2:
        deltas = np.diff(times.asi8)
        if not np.all(deltas == 3_600_000_000_000):
            raise SchemaError("provider returned a non-hourly grid")
    df = pd.DataFrame({"temperature": temp, "dew_point": dew}, index=times)
    df = df.loc[(df.index >= cfg.start) & (df.index < cfg.end)]
    if df.empty:
        raise RangeEmpty("provider returned no rows in range")
    idx = _expected_index(cfg)
    if len(df) != len(idx):
        raise SchemaError("meteo response does not cover the requested range")
    return enforce_hourly_grid(df)


def load_csv(path) -> HourlyFrame:
    """Parse the canonical CSV schema with per-line error reporting."""
    with open(path, "r", newline="") as fh:
        header = fh.readline().rstrip("\n")
        if header != CSV_HEADER:
            raise ParseError(f"unexpected header {header!r}", line=1)
        timestamps, data = [], []
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != len(CSV_COLUMNS) + 1:
                raise ParseError(f"expected {len(CSV_COLUMNS) + 1} fields, "
                                 f"got {len(parts)}", line=lineno)
            try:
                timestamps.append(pd.Timestamp(parts[0]))
            except ValueError as exc:
                raise ParseError(f"bad timestamp {parts[0]!r}: {exc}",
                                 line=lineno) from exc
            try:
                data.append([float(v) for v in parts[1:]])
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno) from exc
    if len(data) < 2:
        raise ParseError("need at least 2 data rows", line=1)
    df = pd.DataFrame(data, columns=CSV_COLUMNS,
                      index=pd.DatetimeIndex(timestamps))
    return enforce_hourly_grid(df)


def save_csv(frame: HourlyFrame, path) -> None:
    """Write the canonical CSV schema (ISO-8601 UTC hours, LF endings)."""
    cols = [c for c in CSV_COLUMNS if c in frame.columns]
    if cols != frame.columns:
        missing = set(frame.columns) - set(cols)
        raise SchemaError(f"frame columns outside the CSV schema: {missing}")
    with open(path, "w", newline="") as fh:
        fh.write("timestamp," + ",".join(cols) + "\n")
        stamps = frame.timestamps.strftime("%Y-%m-%dT%H:00:00Z")
        mat = frame.data.to_numpy()
        for ts, row in zip(stamps, mat):
            fh.write(ts + "," + ",".join(repr(float(v)) for v in row) + "\n")


def merge_align(frames: list[HourlyFrame]) -> HourlyFrame:
    """Inner join on timestamps; column order is concatenation order."""
    seen = set()
    for f in frames:
        for c in f.columns:
            if c in seen:
                raise ColumnCollision(f"column {c!r} appears in two frames")
            seen.add(c)
    merged = reduce(lambda a, b: a.join(b, how="inner"),
                    [f.data for f in frames])
    if len(merged) < 2:
        raise EmptyIntersection("timestamp ranges share fewer than 2 hours")
    return enforce_hourly_grid(merged)
