"""
Logger Helper Class
Provides centralized logging functionality for the spectral lab
"""
import logging
import os
from datetime import datetime
from logging.handlers import RotatingFileHandler
from typing import Optional


class InfoFilter(logging.Filter):
    """Filter to only show records at or above the configured console level"""

    def __init__(self, level: int = logging.INFO):
        super().__init__()
        self.level = level

    def filter(self, record):
        return record.levelno >= self.level


class LoggerHelper:
    """
    Centralized logging helper class that provides consistent logging
    functionality across the lab with configurable output formats.
    """

    _loggers = {}
    _console_level: Optional[int] = None

    @classmethod
    def get_logger(cls, name: str, prefix: str = None) -> logging.Logger:
        """
        Get or create a logger instance with the specified name and prefix

        Args:
            name: Logger name (usually __name__)
            prefix: Optional prefix for log files

        Returns:
            Configured logger instance
        """
        logger_key = f"{name}_{prefix}" if prefix else name

        if logger_key in cls._loggers:
            return cls._loggers[logger_key]

        # Import config here to avoid circular import
        from helpers.config import ConfigHelper

        config = ConfigHelper()
        logger_config = config.get_logger_config()
        log_level = getattr(logging, str(logger_config["level"]).upper(), logging.INFO)

        logger = logging.getLogger(name)
        logger.setLevel(logging.DEBUG if cls._console_level == logging.DEBUG else log_level)
        logger.propagate = False

        # Avoid duplicate handlers
        if logger.handlers or not logger_config["enabled"]:
            cls._loggers[logger_key] = logger
            return logger

        formatter = logging.Formatter(
            logger_config["formatter"],
            datefmt=logger_config["date_format"]
        )

        if logger_config["console_output"]:
            console_level = cls._console_level if cls._console_level is not None else log_level
            console_handler = logging.StreamHandler()
            console_handler.setLevel(console_level)
            console_handler.setFormatter(formatter)
            console_handler.addFilter(InfoFilter(console_level))
            logger.addHandler(console_handler)

        if logger_config["file_output"]:
            logs_dir = logger_config["directory"]
            today = datetime.now().strftime("%Y-%m-%d")
            class_name = name.split('.')[-1] if '.' in name else name
            date_dir = os.path.join(logs_dir, today)
            try:
                os.makedirs(date_dir, exist_ok=True)
                file_handler = RotatingFileHandler(
                    os.path.join(date_dir, f"{class_name}.log"),
                    maxBytes=logger_config["max_file_size"],
                    backupCount=logger_config["backup_count"],
                    encoding=logger_config["encoding"]
                )
                file_handler.setLevel(log_level)
                file_handler.setFormatter(formatter)
                logger.addHandler(file_handler)
            except OSError:
                # Read-only checkouts still get console logging
                pass

        cls._loggers[logger_key] = logger

        return logger

    @classmethod
    def set_console_level(cls, level: int):
        """
        Change the console threshold for every logger created so far and later.

        Used by the CLI for --quiet (WARNING) and --verbose (DEBUG).
        """
        cls._console_level = level
        for logger in cls._loggers.values():
            if level == logging.DEBUG:
                logger.setLevel(logging.DEBUG)
            for handler in logger.handlers:
                if isinstance(handler, logging.StreamHandler) and not isinstance(handler, RotatingFileHandler):
                    handler.setLevel(level)
                    for log_filter in handler.filters:
                        if isinstance(log_filter, InfoFilter):
                            log_filter.level = level
