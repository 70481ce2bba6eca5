"""Exception types shared across the library."""


class ConfigError(ValueError):
    """A run or experiment configuration failed validation."""


class TopologyError(ValueError):
    """A graph is structurally invalid, disconnected, or could not be generated."""


class CsvFormatError(ValueError):
    """A metrics/summary CSV file is malformed."""

    def __init__(self, message, path=None, line=None):
        detail = message
        if path is not None:
            detail = f"{path}: {detail}"
        if line is not None:
            detail = f"{detail} (line {line})"
        super().__init__(detail)
        self.path = path
        self.line = line


class DiagnosticsError(RuntimeError):
    """One or more diagnostic checks failed."""


class DivergedError(RuntimeError):
    """An iterate became non-finite.

    Carries the iteration index at which the first non-finite coordinate
    appeared, and any metric rows collected before the failure.
    """

    def __init__(self, iteration, rows=None):
        super().__init__(f"non-finite iterate detected at iteration {iteration}")
        self.iteration = iteration
        self.rows = rows if rows is not None else []
