"""
Error Types
Exception hierarchy shared by the graph, matching and construction layers.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional


class ErrorCategory(Enum):
    """Error categories for classification."""

    MALFORMED_INPUT = "malformed_input"
    PARAMETER = "parameter"
    CLASSIFICATION = "classification"
    CASE = "case"
    RESOURCE = "resource"
    USAGE = "usage"


@dataclass
class ErrorContext:
    """Context information attached to a raised error."""

    operation: str
    family: Optional[str] = None
    n: Optional[int] = None
    metadata: Dict[str, Any] = field(default_factory=dict)


class PmhError(Exception):
    """Base class for every error raised by pmhprism."""

    category: ErrorCategory = ErrorCategory.MALFORMED_INPUT

    def __init__(self, message: str, context: Optional[ErrorContext] = None):
        super().__init__(message)
        self.context = context

    def to_dict(self) -> Dict[str, Any]:
        """Serializable view used by CLI error records."""
        data: Dict[str, Any] = {
            "error": type(self).__name__,
            "category": self.category.value,
            "message": str(self),
        }
        if self.context is not None:
            data["operation"] = self.context.operation
            if self.context.family is not None:
                data["family"] = self.context.family
            if self.context.n is not None:
                data["n"] = self.context.n
        return data


class MalformedInputError(PmhError):
    """Edge index out of range, unknown label, or an edge set of the wrong graph."""


class MalformedFactorError(PmhError):
    """An edge set handed to cycle machinery is not 2-regular and spanning."""


class UnsupportedDegreeError(PmhError):
    """An operation that needs a cubic graph received a non-cubic one."""


class NoMatchingPossibleError(PmhError):
    """Perfect matchings were requested on a graph of odd order."""


class InvalidParameterError(PmhError):
    """Family parameter or pole index outside its domain."""

    category = ErrorCategory.PARAMETER


class UnsupportedParameterError(PmhError):
    """Parameter is valid for the family but not for the requested operation."""

    category = ErrorCategory.PARAMETER


class TheoremScopeError(UnsupportedParameterError):
    """The constructive extender only covers crossed prisms with even n."""


class UndefinedClassificationError(PmhError):
    """2-chain symmetry is only defined for matchings that avoid the cut."""

    category = ErrorCategory.CLASSIFICATION


class WrongCaseError(PmhError):
    """A case construction received a matching with the wrong cut size."""

    category = ErrorCategory.CASE


class ResourceCapExceeded(PmhError):
    """Per-instance timeout or matching-count cap was hit."""

    category = ErrorCategory.RESOURCE


class UsageError(PmhError):
    """Bad command-line input (family name, edge-list token)."""

    category = ErrorCategory.USAGE
