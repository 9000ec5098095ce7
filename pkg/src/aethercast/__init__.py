"""Leakage-aware hourly PM2.5 forecasting and deployment-regime benchmark."""

__version__ = "0.1.0"

from .series import ChronoSplit, HourlyFrame, WeekWindow, chrono_split, \
    enforce_hourly_grid, weekly_windows

__all__ = [
    "ChronoSplit", "HourlyFrame", "WeekWindow", "chrono_split",
    "enforce_hourly_grid", "weekly_windows", "__version__",
]
