class QClockSyncError(Exception):
    """Base exception for qclocksync."""


class InvalidEnsembleError(QClockSyncError):
    pass


class CapacityError(QClockSyncError):
    pass


class DimensionError(QClockSyncError):
    pass


class ScheduleError(QClockSyncError):
    pass


class CoverageError(QClockSyncError):
    pass


class RecordFormatError(QClockSyncError):
    pass


class ConfigError(QClockSyncError):
    """Configuration problem; ``key`` or ``line`` points at the offending input."""

    def __init__(self, message: str, *, key: str | None = None, line: int | None = None):
        super().__init__(message)
        self.key = key
        self.line = line
