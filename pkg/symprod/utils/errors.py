"""
Exception hierarchy for symprod

Every error carries the process exit code the CLI uses for it, and a
machine-readable ``to_dict()`` form.
"""

from typing import Any, Dict, Optional


class SymprodError(Exception):
    """Base class for all symprod errors"""

    exit_code: int = 1

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": type(self).__name__,
            "message": self.message,
            "exit_code": self.exit_code,
            "details": self.details,
        }


class ValidationError(SymprodError, ValueError):
    """Invalid input: documents, arguments, sizes"""

    exit_code = 2


class ParseError(ValidationError):
    """Polynomial or scalar text could not be parsed"""

    def __init__(self, message: str, text: str = "", position: int = 0):
        line = text.count("\n", 0, position) + 1
        column = position - (text.rfind("\n", 0, position) + 1) + 1
        super().__init__(
            f"{message} at line {line}, column {column}",
            {"text": text, "position": position, "line": line, "column": column},
        )
        self.position = position
        self.line = line
        self.column = column


class SizeLimitError(ValidationError):
    """An enumeration would exceed its configured limit"""


class DimensionMismatchError(ValidationError):
    """Point or polynomial has the wrong number of variables"""


class LabelMismatchError(ValidationError):
    """Finite algebra element and functional disagree on labels"""


class DegreeOverflowError(ValidationError):
    """A moment beyond the table's degree bound was requested"""


class ConfigurationError(ValidationError):
    """Configuration is invalid or too small for the requested check"""


class NumericalError(SymprodError):
    """A numerical routine failed to converge"""

    exit_code = 3


class ClusteringAmbiguityError(NumericalError):
    """Root clusters are too close to assign multiplicities reliably"""


class ReconstructionError(SymprodError):
    """Point recovery failed verification after all retries"""

    exit_code = 3

    def __init__(
        self,
        message: str,
        best_residual: Any = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        payload = dict(details or {})
        payload["best_residual"] = None if best_residual is None else str(best_residual)
        super().__init__(message, payload)
        self.best_residual = best_residual


class InconsistencyError(SymprodError):
    """Recovered data contradicts the input"""

    exit_code = 3


class NotFrobeniusError(SymprodError):
    """The functional is not a Frobenius n-homomorphism"""

    exit_code = 4


class AnnihilationError(NotFrobeniusError):
    """The functional does not vanish on the given ideal"""


class InternalError(SymprodError):
    """Unexpected failure inside a command"""

    exit_code = 1
