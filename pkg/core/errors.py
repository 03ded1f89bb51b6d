"""
Error handling and custom exceptions for shaketab.

Every exception carries the process exit code the CLI reports for it:
2 configuration, 3 input data, 4 numerical abort.
"""

from typing import Any, Callable, Optional

from core.logger import get_logger

logger = get_logger(__name__)


# ============ CUSTOM EXCEPTIONS ============

class ShakeTabError(Exception):
    """Base exception for all shaketab errors."""

    exit_code: int = 1


class ConfigurationError(ShakeTabError, ValueError):
    """Raised when a scenario or system parameter is invalid."""

    exit_code = 2


class InputDataError(ShakeTabError, ValueError):
    """Raised when input data (records, CSV files, series) is unusable."""

    exit_code = 3


class NumericalError(ShakeTabError, ArithmeticError):
    """Raised when a numerical procedure cannot produce a valid result."""

    exit_code = 4


# ---------------------------- configuration

class InvalidMass(ConfigurationError):
    """Raised when a mass is not strictly positive."""


class InvalidFrame(ConfigurationError):
    """Raised when specimen parameters violate the frame invariants."""


class NyquistViolation(ConfigurationError):
    """Raised when a sample interval cannot represent a filter cutoff."""


class StepTooLarge(ConfigurationError):
    """Raised when the step exceeds the limit of a stiff model."""


class UnknownSystem(ConfigurationError):
    """Raised when a named system is not known."""


class ImproperSystem(ConfigurationError):
    """Raised when a transfer function has deg(num) > deg(den)."""


# ---------------------------- input data

class MalformedHeader(InputDataError):
    """Raised when an AT2 header lacks usable NPTS/DT tokens."""


class SampleCountMismatch(InputDataError):
    """Raised when the parsed sample count differs from NPTS."""


class NonFiniteSample(InputDataError):
    """Raised when a record contains NaN or infinite samples."""


class MalformedSample(InputDataError):
    """Raised when a record sample is not a number."""


class LengthMismatch(InputDataError):
    """Raised when two series that must align differ in length or step."""


class UnitMismatch(InputDataError):
    """Raised when two series that must align carry different units."""


class ZeroReference(InputDataError):
    """Raised when a reference series is identically zero."""


class TooShort(InputDataError):
    """Raised when a series has too few samples for an operation."""


class IoFailure(InputDataError):
    """Raised when a file cannot be read or written."""


class SchemaMismatch(InputDataError):
    """Raised when a CSV file does not have the expected columns."""


# ---------------------------- numerical

class SingularAtFrequency(NumericalError):
    """Raised when a frequency response is evaluated at a pole."""


class ConvergenceFailure(NumericalError):
    """Raised when an iterative solver hits its iteration cap."""


class NotHurwitz(NumericalError):
    """Raised when a matrix expected to be Hurwitz has an eigenvalue with Re >= 0."""


class SingularSystem(NumericalError):
    """Raised when a linear system has no unique solution."""


class Uncontrollable(NumericalError):
    """Raised when a pair (A, B) is not controllable."""


class NonFiniteState(NumericalError):
    """Raised when a simulation state becomes NaN or infinite."""

    def __init__(self, message: str, t: Optional[float] = None):
        super().__init__(message if t is None else f"{message} at t={t:.6f} s")
        self.t = t


# ============ ERROR HANDLERS ============

def exit_code_for(exc: BaseException) -> int:
    """Exit code the CLI reports for an exception."""
    if isinstance(exc, ShakeTabError):
        return exc.exit_code
    return 1


def safe_execute(
    func: Callable,
    *args,
    default_return: Any = None,
    error_message: str = "Operation failed",
    **kwargs
) -> Any:
    """
    Safely execute a function with error handling.
    Returns default_return on failure.
    """
    try:
        return func(*args, **kwargs)
    except ShakeTabError as e:
        logger.error(f"{error_message}: {type(e).__name__}: {e}")
        return default_return
    except Exception as e:
        logger.exception(f"{error_message}: unexpected {type(e).__name__}: {e}")
        return default_return
