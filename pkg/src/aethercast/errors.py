"""Exception hierarchy shared across the pipeline."""


class AethercastError(Exception):
    """Base class for all pipeline errors."""


# --- series / grid ---------------------------------------------------------

class DuplicateTimestamp(AethercastError):
    def __init__(self, ts):
        self.ts = ts
        super().__init__(f"duplicate timestamp {ts}")


class GridGap(AethercastError):
    def __init__(self, t_prev, t_next):
        self.t_prev = t_prev
        self.t_next = t_next
        super().__init__(f"hourly grid gap between {t_prev} and {t_next}")


class EmptySegment(AethercastError):
    pass


# --- ingest ----------------------------------------------------------------

class HttpError(AethercastError):
    def __init__(self, status, url=""):
        self.status = status
        super().__init__(f"HTTP {status} from {url}")


class SchemaError(AethercastError):
    pass


class RangeEmpty(AethercastError):
    pass


class ParseError(AethercastError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyIntersection(AethercastError):
    pass


class ColumnCollision(AethercastError):
    pass


# --- preprocess ------------------------------------------------------------

class ZeroVariance(AethercastError):
    def __init__(self, column):
        self.column = column
        super().__init__(f"column {column!r} has zero variance")


class MissingColumn(AethercastError):
    def __init__(self, column):
        self.column = column
        super().__init__(f"column {column!r} missing from frame")


# --- models ----------------------------------------------------------------

class TooShort(AethercastError):
    pass


class NumericalDivergence(AethercastError):
    pass


class OptimizerFailure(AethercastError):
    pass


class NonFiniteObjective(AethercastError):
    pass


class SingularSystem(AethercastError):
    pass


class NonFiniteLoss(AethercastError):
    pass


class DimensionMismatch(AethercastError):
    pass


# --- regimes / evaluation --------------------------------------------------

class IncompleteWeek(AethercastError):
    pass


class LengthMismatch(AethercastError):
    pass


class NonFinite(AethercastError):
    pass


class EmptyRun(AethercastError):
    pass


class WeekFailure(AethercastError):
    """A model fit or forecast failed partway through a regime run."""

    def __init__(self, week, cause):
        self.week = week
        self.cause = cause
        super().__init__(f"week {week}: {cause}")


# --- config ----------------------------------------------------------------

class ConfigError(AethercastError):
    pass


class UnknownKey(ConfigError):
    def __init__(self, key):
        self.key = key
        super().__init__(f"unknown config key {key!r}")


class InvalidValue(ConfigError):
    def __init__(self, key, value, reason=""):
        self.key = key
        self.value = value
        msg = f"invalid value for {key!r}: {value!r}"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)
