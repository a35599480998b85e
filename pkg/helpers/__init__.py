"""
Helpers package providing utility classes for the lab,
including logging, configuration management, constants and errors.
"""
from .config import ConfigHelper
from .logger import LoggerHelper
from .exceptions import (
    SpectralLabError, BudgetExceededError, ImproperLengthError, CombinatorError,
    CocycleError, FamilyMismatchError, OperatorNormError, LPError,
    DegenerateSeminormError, ConfigParseError, ConfigValidationError,
    ExperimentAbortedError, TruncationError,
)

# Shared instance for modules that only read settings
_config_helper = ConfigHelper()

__all__ = [
    'LoggerHelper',
    'ConfigHelper',
    'config_helper',
    'SpectralLabError',
    'BudgetExceededError',
    'ImproperLengthError',
    'CombinatorError',
    'CocycleError',
    'FamilyMismatchError',
    'OperatorNormError',
    'LPError',
    'DegenerateSeminormError',
    'ConfigParseError',
    'ConfigValidationError',
    'ExperimentAbortedError',
    'TruncationError',
]

config_helper = _config_helper
