"""
Configuration management utility for qhelper.

Defaults come from qhelper/config/defaults.json, optionally overlaid by the
JSON file named in QHELPER_CONFIG and by environment variables.
"""
import os
import json
import copy
from typing import Dict, Any, Optional
from pathlib import Path

from dotenv import load_dotenv

from qhelper.core.errors import ConfigurationError
from qhelper.utils.centralized_logging import get_logger

logger = get_logger(__name__)

_env_path = Path.cwd() / ".env"
if _env_path.exists():
    load_dotenv(_env_path)

DEFAULTS_PATH = Path(__file__).parent.parent / "config" / "defaults.json"

# env var -> (dot path, caster)
ENV_OVERRIDES = {
    "QHELPER_THREADS": ("processing.max_workers", int),
    "QHELPER_RESTARTS": ("frontier.restarts", int),
    "QHELPER_MAX_ITERS": ("frontier.max_iters", int),
    "QHELPER_AUDIT_MAX_DIM": ("audit.max_dim", int),
}


def _deep_merge(base: Dict[str, Any], overlay: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in overlay.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


class ConfigManager:
    """Manages configuration loading and access."""

    def __init__(self, config_path: Optional[str] = None):
        self.config_path = Path(config_path) if config_path else None
        self._config: Dict[str, Any] = {}
        self.load_default_config()

    def load_default_config(self) -> Dict[str, Any]:
        """Load defaults, the optional override file, then environment overrides."""
        self._config = self._read_json(DEFAULTS_PATH)

        override_path = self.config_path or (
            Path(os.environ["QHELPER_CONFIG"]) if os.environ.get("QHELPER_CONFIG") else None
        )
        if override_path is not None:
            self._config = _deep_merge(self._config, self._read_json(override_path))
            logger.info(f"Loaded configuration overrides from: {override_path}")

        for env_name, (key_path, caster) in ENV_OVERRIDES.items():
            raw = os.environ.get(env_name)
            if raw is None or raw == "":
                continue
            try:
                self.set(key_path, caster(raw))
            except ValueError:
                raise ConfigurationError(f"{env_name} must be {caster.__name__}, got {raw!r}")

        workers = self.get("processing.max_workers", 1)
        if not isinstance(workers, int) or workers < 1:
            raise ConfigurationError(f"processing.max_workers must be a positive integer, got {workers!r}")

        return self._config

    @staticmethod
    def _read_json(path: Path) -> Dict[str, Any]:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                data = json.load(handle)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigurationError(f"Cannot read configuration {path}: {e}")
        if not isinstance(data, dict):
            raise ConfigurationError(f"Configuration {path} must hold a JSON object")
        return data

    def get(self, key_path: str, default: Any = None) -> Any:
        """
        Get configuration value using dot notation.

        Args:
            key_path: Dot-separated path to the configuration value
            default: Default value if key not found

        Returns:
            Configuration value or default
        """
        value: Any = self._config
        for key in key_path.split('.'):
            if isinstance(value, dict) and key in value:
                value = value[key]
            else:
                return default
        return value

    def set(self, key_path: str, value: Any) -> None:
        """Set a configuration value using dot notation."""
        keys = key_path.split('.')
        node = self._config
        for key in keys[:-1]:
            node = node.setdefault(key, {})
        node[keys[-1]] = value

    def section(self, name: str) -> Dict[str, Any]:
        """Get a copy of a top-level configuration section."""
        result = self.get(name, {})
        return dict(result) if isinstance(result, dict) else {}


# Global configuration instance
config = ConfigManager()
