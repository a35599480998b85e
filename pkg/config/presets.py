"""
Suite presets configuration.

This module provides the minimal experiment configurations used by the
suite commands when no --config file is given. All presets are kept in
presets.json next to this file.
"""

import json
from pathlib import Path


def load_presets_config():
    """Load preset configuration from presets.json file."""
    config_path = Path(__file__).parent / "presets.json"

    if config_path.exists():
        try:
            with open(config_path, 'r', encoding='utf-8') as f:
                return json.load(f)
        except (json.JSONDecodeError, IOError) as e:
            print(f"Warning: Could not load presets.json: {e}")
            return {}
    return {}


def get_presets():
    """
    Get every suite preset keyed by command name.

    Returns:
        dict: command name -> raw experiment mapping
    """
    return load_presets_config().get("suites", {})


def get_preset(name: str):
    """Get a single preset mapping, or an empty dict when it is unknown."""
    return json.loads(json.dumps(get_presets().get(name, {})))
