"""Exceptions raised by the library; the CLI maps them to exit codes."""

from typing import Dict, Optional


class PinnFemError(RuntimeError):
    """Base class of every error raised on purpose by pinnfem."""


class InputError(PinnFemError):
    """Argument of the wrong shape, length or range."""


class CapabilityError(PinnFemError):
    """The request is well formed but not supported."""


class MeshError(PinnFemError):
    """Degenerate mesh geometry."""


class ShiftError(PinnFemError):
    """The multiplicative enrichment factor comes too close to zero."""


class CheckpointFormatError(PinnFemError):
    """A network checkpoint file could not be parsed."""

    line_number: int
    """1-based line of the offending content."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class ConfigError(PinnFemError):
    """Invalid run configuration."""

    line_number: Optional[int]

    def __init__(self, message: str, line_number: Optional[int] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class SolverError(PinnFemError):
    """The linear solve failed or did not reach its tolerance."""

    residual: float
    """Relative residual achieved before giving up."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (relative residual {residual:.3e})")
        self.residual = residual


class TrainingDivergenceError(PinnFemError):
    """A training loss became NaN or infinite."""

    epoch: int
    losses: Dict[str, float]

    def __init__(self, epoch: int, losses: Dict[str, float]):
        detail = ", ".join(f"{name}={value!r}" for name, value in losses.items())
        super().__init__(f"non-finite loss at epoch {epoch}: {detail}")
        self.epoch = epoch
        self.losses = losses
