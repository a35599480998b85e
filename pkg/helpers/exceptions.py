"""
Exception hierarchy for the spectral lab.

Library code raises these; the CLI maps them onto exit codes.
"""
from typing import Any, Dict, Optional


class SpectralLabError(Exception):
    """Base class for every error raised by the lab"""


class BudgetExceededError(SpectralLabError):
    """An enumeration or vertex search would exceed its configured budget"""

    def __init__(self, message: str, required: int = 0, budget: int = 0):
        super().__init__(message)
        self.required = required
        self.budget = budget


class ImproperLengthError(SpectralLabError):
    """A length function without finite balls was used where properness is needed"""


class CombinatorError(SpectralLabError):
    """A combinator failed the monotone-norm checks"""


class CocycleError(SpectralLabError):
    """A cocycle evaluator failed the randomized identity checks"""


class FamilyMismatchError(SpectralLabError):
    """Elements, balls or lengths from different group families were mixed"""


class TruncationError(SpectralLabError):
    """A truncation does not cover the elements an operator acts on"""


class OperatorNormError(SpectralLabError):
    """Norm iteration hit its cap; the certified bracket is attached"""

    def __init__(self, message: str, estimate: Any = None):
        super().__init__(message)
        self.estimate = estimate


class LPError(SpectralLabError):
    """A linear program was infeasible or the solver failed"""


class DegenerateSeminormError(LPError):
    """The seminorm kernel is larger than the constants (unbounded LP)"""


class ConfigParseError(SpectralLabError):
    """An experiment file could not be parsed"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{location}")
        self.line = line
        self.column = column


class ConfigValidationError(SpectralLabError):
    """An experiment file parsed but a field is invalid"""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class ExperimentAbortedError(SpectralLabError):
    """A sub-experiment failed; partial results are attached"""

    def __init__(self, message: str, partial: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.partial = partial or {}
