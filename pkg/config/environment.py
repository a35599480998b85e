"""
Environment Configuration Module

Environment variables that override config/app.json. Malformed numbers
fall back to the file value.
"""

import os
from typing import Callable, Optional, TypeVar

T = TypeVar('T', int, float)


def _number(name: str, default: T, parse: Callable[[str], T]) -> T:
    raw = os.getenv(name)
    if raw is None:
        return default
    try:
        return parse(raw)
    except ValueError:
        return default


def _flag(name: str) -> bool:
    return os.getenv(name, 'true').lower() == 'true'


class EnvironmentConfig:
    """Environment-based configuration manager"""

    @staticmethod
    def get_output_dir() -> Optional[str]:
        """SPECTRAL_LAB_OUTPUT_DIR, if set and non-empty"""
        return os.getenv('SPECTRAL_LAB_OUTPUT_DIR') or None

    @staticmethod
    def get_budget(default: int) -> int:
        return _number('SPECTRAL_LAB_BUDGET', default, int)

    @staticmethod
    def get_tolerance(default: float) -> float:
        return _number('SPECTRAL_LAB_TOLERANCE', default, float)

    @staticmethod
    def get_seed(default: int) -> int:
        return _number('SPECTRAL_LAB_SEED', default, int)

    @staticmethod
    def get_max_workers(default: int) -> int:
        """Worker threads for level experiments, at least one"""
        return max(1, _number('SPECTRAL_LAB_MAX_WORKERS', default, int))

    @staticmethod
    def get_logger_enabled() -> bool:
        return _flag('LOGGER_ENABLED')

    @staticmethod
    def get_log_console_output() -> bool:
        return _flag('LOGGER_CONSOLE_OUTPUT')

    @staticmethod
    def get_log_file_output() -> bool:
        return _flag('LOGGER_FILE_OUTPUT')
