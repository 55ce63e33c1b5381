"""Shared exception types.

The CLI maps these onto exit codes: ConfigError -> 2, DataError -> 3,
anything else (including invariant violations raised as ValueError) -> 4.
"""


class CorecovError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(CorecovError):
    """Invalid configuration: unknown format, bad parameter, missing path."""


class DataError(CorecovError):
    """Malformed input data (corpus rows, seed lexicon) in strict contexts."""


class PipelineError(CorecovError):
    """A pipeline stage failed; carries the stage name for diagnostics."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
