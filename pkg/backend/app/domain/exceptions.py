"""
Error hierarchy for the workbench
Domain violations also derive from ValueError so callers can catch either
"""

from typing import Any, List, Optional, Tuple


class WorkbenchError(Exception):
    """Root of all workbench errors"""


class DomainError(WorkbenchError, ValueError):
    """A precondition on an operation's inputs was violated"""


class DegenerateAspectError(DomainError):
    """Raised when 2*height >= length, so the Lemma 1 radicand is not positive"""

    def __init__(self, length: float, height: float):
        self.length = length
        self.height = height
        super().__init__(
            f"Degenerate aspect: need 2*height < length, got length={length!r}, height={height!r}"
        )


class BilacunarityError(WorkbenchError, ValueError):
    """No reindexing point j0 exists within the validated prefix"""

    def __init__(self, message: str, violations: Optional[List[Tuple[int, float]]] = None):
        self.violations = violations or []
        super().__init__(message)


class ConstructionError(WorkbenchError, ValueError):
    """A rectangle family could not be built with the requested parameters"""


class CertificationError(WorkbenchError):
    """A witness point failed the maximal-function lower bound"""

    def __init__(self, point: Tuple[float, float], value: float, threshold: float, context: Any = None):
        self.point = point
        self.value = value
        self.threshold = threshold
        self.context = context
        super().__init__(
            f"Certification failed at point ({point[0]!r}, {point[1]!r}): "
            f"value {value!r} below threshold {threshold!r}"
        )


class UnionBoundsError(WorkbenchError):
    """Exact sweep result outside [max |P_i|, sum |P_i|]"""

    def __init__(self, value: float, lower: float, upper: float):
        self.value = value
        self.lower = lower
        self.upper = upper
        super().__init__(f"Exact union area {value!r} outside [{lower!r}, {upper!r}]")


class OutputError(WorkbenchError, OSError):
    """Artifacts could not be written"""
