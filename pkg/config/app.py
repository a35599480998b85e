"""
Application configuration settings.

This module provides lab-wide configuration settings in JSON format.
Defaults live here, config/app.json overrides them, and the environment
overrides both through get_dynamic_config().
"""

import copy
import json
import os
from pathlib import Path
from config.environment import EnvironmentConfig


_DEFAULTS = {
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
    "output": {
        "directory": "results",
        "format": "json",
    },
    "logger": {
        "directory": "logs",
        "log_level": "INFO",
        "log_formatter": "%(asctime)s - %(levelname)s - %(name)s - %(message)s",
        "log_date_format": "%Y-%m-%d %H:%M:%S",
        "max_file_size": 5242880,  # 5MB in bytes
        "backup_count": 7,
        "encoding": "utf-8",
        "console_output": True,
        "file_output": True,
        "enabled": True
    }
}


def _merge(base: dict, override: dict) -> dict:
    """Recursively merge override into a copy of base"""
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def get_app_config():
    """
    Get application configuration as JSON-compatible dictionary.

    Returns:
        dict: Application configuration settings
    """
    config = copy.deepcopy(_DEFAULTS)

    app_settings_path = Path(__file__).parent / "app.json"
    if app_settings_path.exists():
        try:
            with open(app_settings_path, 'r', encoding='utf-8') as f:
                config = _merge(config, json.load(f))
        except (json.JSONDecodeError, IOError) as e:
            print(f"Warning: Could not load app.json: {e}")

    return config


def get_dynamic_config():
    """
    Get dynamic configuration with environment overlays applied.

    Returns:
        dict: Dynamic configuration settings
    """
    config = get_app_config()

    lab = config['lab']
    lab['budget'] = EnvironmentConfig.get_budget(lab['budget'])
    lab['tolerance'] = EnvironmentConfig.get_tolerance(lab['tolerance'])
    lab['seed'] = EnvironmentConfig.get_seed(lab['seed'])
    lab['max_workers'] = EnvironmentConfig.get_max_workers(lab['max_workers'])

    output_dir = EnvironmentConfig.get_output_dir()
    if output_dir:
        config['output']['directory'] = output_dir

    # Logger configuration from env
    config['logger']['enabled'] = EnvironmentConfig.get_logger_enabled()
    config['logger']['log_level'] = os.getenv('LOGGER_LEVEL', config['logger']['log_level'])
    if os.getenv('LOGGER_CONSOLE_OUTPUT') is not None:
        config['logger']['console_output'] = EnvironmentConfig.get_log_console_output()
    if os.getenv('LOGGER_FILE_OUTPUT') is not None:
        config['logger']['file_output'] = EnvironmentConfig.get_log_file_output()

    return config


def get_app_setting(section: str, key: str, default=None):
    """
    Get a specific setting value.

    Args:
        section (str): Top-level section ("lab", "output", "logger")
        key (str): The setting key to retrieve
        default: Default value if key not found

    Returns:
        The setting value or default
    """
    config = get_dynamic_config()
    return config.get(section, {}).get(key, default)


if __name__ == "__main__":
    # Use print for testing output, not for logging
    print(json.dumps(get_dynamic_config(), indent=2, ensure_ascii=False))
