"""Exception hierarchy shared across the package.

Every error raised by library code derives from ForteError so callers can
catch at one level; the HTTP layer maps subclasses onto status codes.
"""

from __future__ import annotations


class ForteError(Exception):
    """Base class for all package errors."""

    code = "error"


class ChannelNotFound(ForteError):
    code = "channel_not_found"


class OutOfRange(ForteError):
    code = "out_of_range"


class EmptyChannel(ForteError):
    code = "empty_channel"


class UninterpolatableChannel(ForteError):
    """Channel has no observed samples to anchor interpolation on."""

    code = "uninterpolatable_channel"


class IngestError(ForteError):
    """Malformed input file; carries the offending 1-based row number."""

    code = "ingest_error"

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


class ShapeMismatch(ForteError):
    code = "shape_mismatch"


class EmptyInput(ForteError):
    code = "empty_input"


class BaselineMismatch(ForteError):
    code = "baseline_mismatch"


class InsufficientTraining(ForteError):
    code = "insufficient_training"


class InsufficientContext(ForteError):
    code = "insufficient_context"


class DegenerateWindow(ForteError):
    code = "degenerate_window"


class InvalidCombination(ForteError):
    code = "invalid_combination"


class InvalidLevel(ForteError):
    code = "invalid_level"


class InvalidSpec(ForteError):
    """Experiment spec failed validation; carries per-field messages."""

    code = "invalid_spec"

    def __init__(self, field_errors: dict[str, str]):
        super().__init__("; ".join(f"{k}: {v}" for k, v in sorted(field_errors.items())))
        self.field_errors = field_errors


class ExperimentSetupError(ForteError):
    code = "experiment_setup_error"


class ModelNotFitted(ForteError):
    code = "model_not_fitted"


class NotReady(ForteError):
    code = "not_ready"


class NotFound(ForteError):
    code = "not_found"


class StorageError(ForteError):
    code = "storage_error"
