"""Exception hierarchy shared by every flowminer package."""

from __future__ import annotations

from typing import Any, Optional, Sequence


class FlowMinerError(Exception):
    """Base exception for flowminer errors."""
    pass


class ConfigError(FlowMinerError, ValueError):
    """Raised when a configuration value is invalid. Names the offending field."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class DataError(FlowMinerError):
    """Raised when input data (flows, traces, models, patterns) is unusable."""
    pass


class InvariantViolation(FlowMinerError):
    """Raised when an internal invariant does not hold."""
    pass


# ── Flows ────────────────────────────────────────────────────────────────────

class FlowError(DataError):
    """Base exception for flow definition problems."""
    pass


class FlowInputError(FlowError, ValueError):
    """Raised when a marking references places unknown to the flow."""
    pass


class TransitionNotEnabledError(FlowError):
    """Raised when firing a transition whose preset is not marked."""
    pass


class UnboundedFlowError(FlowError):
    """Raised when execution enumeration exceeds the step bound."""

    def __init__(self, flow_name: str, max_steps: int):
        self.flow_name = flow_name
        self.max_steps = max_steps
        super().__init__(
            f"possibly unbounded flow '{flow_name}': a path exceeded {max_steps} steps"
        )


class FlowValidationError(FlowError):
    """Raised when a flow with error-level violations is used."""

    def __init__(self, flow_name: str, violations: Sequence[Any]):
        self.flow_name = flow_name
        self.violations = list(violations)
        detail = "; ".join(str(v) for v in self.violations)
        super().__init__(f"flow '{flow_name}' is invalid: {detail}")


# ── Traces ───────────────────────────────────────────────────────────────────

class TraceParseError(DataError, ValueError):
    """Raised when a trace file line cannot be parsed."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


# ── Models ───────────────────────────────────────────────────────────────────

class ModelError(DataError):
    """Raised for invalid model queries or malformed model files."""
    pass


class MissingModelError(ModelError):
    """Raised when the miner needs a model for a length that was not trained."""

    def __init__(self, length: int):
        self.length = length
        super().__init__(f"no sequence model for pattern length {length}")


class TrainingError(DataError):
    """Raised when training cannot start or cannot proceed."""
    pass


class TrainingDivergedError(TrainingError):
    """Raised when the training loss becomes non-finite."""

    def __init__(
        self,
        epoch: int,
        batch: int,
        learning_rate: float,
        last_finite_loss: Optional[float],
    ):
        self.epoch = epoch
        self.batch = batch
        self.learning_rate = learning_rate
        self.last_finite_loss = last_finite_loss
        super().__init__(
            f"training diverged at epoch {epoch}, batch {batch} "
            f"(learning_rate={learning_rate:g}, last finite loss={last_finite_loss!r})"
        )


# ── Pipeline stages ─────────────────────────────────────────────────────────

class SimulationError(DataError):
    """Raised when a simulation cannot be run."""
    pass


class SlicingError(DataError):
    """Raised for unknown slicing methods or unreadable slice indexes."""
    pass


class MiningError(DataError):
    """Raised when pattern mining cannot be run."""
    pass


class EvaluationError(DataError):
    """Raised when ground truth cannot be built or a report cannot be produced."""
    pass
