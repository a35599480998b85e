"""
Global Configuration Helper Class
Provides centralized configuration management for the entire lab
"""
from typing import Any, Dict


class ConfigHelper:
    """
    Global configuration class that loads settings from the config package.

    Numeric defaults for the lab (budgets, tolerances, sample counts),
    output settings and the logger section are all read through here.
    """

    def __init__(self):
        """Initialize the configuration helper"""
        self._config = {}
        self._load_configs()

    def _load_configs(self):
        """Load all configuration files"""
        try:
            from config.app import get_dynamic_config
            self._config.update(get_dynamic_config())
        except Exception:
            # Set default values if loading fails
            self._config = {
                "lab": {
                    "budget": 1_000_000,
                    "tolerance": 1e-9,
                    "sample_count": 200,
                    "window_factor": 4.0,
                    "seed": 20240101,
                    "exact_lp_max_points": 12,
                    "vertex_budget": 4096,
                    "dense_cutoff": 512,
                    "max_iterations": 5000,
                    "max_workers": 2,
                    "fejer_width": 1000.0,
                    "suite_diameter_proxy": 8.0,
                    "suite_epsilon": 3.0,
                },
                "output": {"directory": "results", "format": "json"},
                "logger": {
                    "directory": "logs",
                    "log_level": "INFO",
                    "log_formatter": "%(asctime)s - %(levelname)s - %(name)s - %(message)s",
                    "log_date_format": "%Y-%m-%d %H:%M:%S",
                    "max_file_size": 5242880,
                    "backup_count": 7,
                    "encoding": "utf-8",
                    "console_output": True,
                    "file_output": True,
                    "enabled": True,
                },
            }

    def _lab(self, key: str, default: Any) -> Any:
        return self._config.get("lab", {}).get(key, default)

    def get_budget(self) -> int:
        """Get the cardinality budget for ball enumeration"""
        return int(self._lab("budget", 1_000_000))

    def get_tolerance(self) -> float:
        """Get the relative tolerance for norm iterations and inequality checks"""
        return float(self._lab("tolerance", 1e-9))

    def get_sample_count(self) -> int:
        """Get the default number of sampled states or functions"""
        return int(self._lab("sample_count", 200))

    def get_window_factor(self) -> float:
        """Get the factor between a level ball radius and its infinity window"""
        return float(self._lab("window_factor", 4.0))

    def get_seed(self) -> int:
        """Get the default random seed"""
        return int(self._lab("seed", 20240101))

    def get_exact_lp_max_points(self) -> int:
        """Get the largest point count solved with exact rational arithmetic"""
        return int(self._lab("exact_lp_max_points", 12))

    def get_vertex_budget(self) -> int:
        """Get the budget for unit-ball vertex enumeration"""
        return int(self._lab("vertex_budget", 4096))

    def get_dense_cutoff(self) -> int:
        """Get the largest matrix dimension normed through a dense SVD"""
        return int(self._lab("dense_cutoff", 512))

    def get_max_iterations(self) -> int:
        """Get the iteration cap for operator norm estimation"""
        return int(self._lab("max_iterations", 5000))

    def get_max_workers(self) -> int:
        """Get the thread count for level experiments"""
        return int(self._lab("max_workers", 2))

    def get_fejer_width(self) -> float:
        """Get the default Fejér triangle width used by bridge certificates"""
        return float(self._lab("fejer_width", 1000.0))

    def get_suite_diameter_proxy(self) -> float:
        """Get the diameter proxy C used by the suite presets"""
        return float(self._lab("suite_diameter_proxy", 8.0))

    def get_suite_epsilon(self) -> float:
        """Get the bridge ε used by the suite presets; stays below C/2"""
        return float(self._lab("suite_epsilon", 3.0))

    def get_output_dir(self) -> str:
        """Get the directory results are written to"""
        return self._config.get("output", {}).get("directory", "results")

    def get_output_format(self) -> str:
        """Get the default results format (json or csv)"""
        return self._config.get("output", {}).get("format", "json")

    def get_logger_config(self) -> Dict[str, Any]:
        """Get logger configuration"""
        logger = self._config.get("logger", {})
        return {
            "enabled": logger.get("enabled", True),
            "directory": logger.get("directory", "logs"),
            "level": logger.get("log_level", "INFO"),
            "formatter": logger.get("log_formatter", "%(asctime)s - %(levelname)s - %(name)s - %(message)s"),
            "date_format": logger.get("log_date_format", "%Y-%m-%d %H:%M:%S"),
            "max_file_size": logger.get("max_file_size", 5242880),
            "backup_count": logger.get("backup_count", 7),
            "encoding": logger.get("encoding", "utf-8"),
            "console_output": logger.get("console_output", True),
            "file_output": logger.get("file_output", True)
        }

    def get_log_level(self) -> str:
        """Get log level"""
        return self.get_logger_config()["level"]

    def get_config(self, key: str, default: Any = None) -> Any:
        """
        Get configuration section or value by key

        Args:
            key: Configuration key
            default: Default value if key not found

        Returns:
            Configuration value
        """
        return self._config.get(key, default)
