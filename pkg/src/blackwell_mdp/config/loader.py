"""Configuration loader for the Blackwell toolkit."""

import json
import logging
import os
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

import jsonschema
import yaml
from dotenv import find_dotenv, load_dotenv
from jsonschema import ValidationError

from .models import (
    ToolkitConfig,
    AnalysisSettings,
    SolverSettings,
    IoSettings,
    ReportSettings,
    LoggingConfig,
)

logger = logging.getLogger(__name__)

CONFIG_DIR = Path(__file__).parent.parent.parent.parent / "config"


class ConfigError(Exception):
    """Raised when configuration is invalid."""
    exit_code = 1


def _flag(value: str) -> bool:
    return value.strip().lower() in {"1", "true", "yes", "on"}


# Environment variable -> (section, key, converter)
ENV_OVERRIDES: Dict[str, Tuple[str, str, Callable[[str], Any]]] = {
    "BLACKWELL_POLICY_GUARD": ("analysis", "policy_guard", int),
    "BLACKWELL_VERTEX_GUARD": ("analysis", "vertex_guard", int),
    "BLACKWELL_PARALLEL": ("analysis", "parallel", _flag),
    "BLACKWELL_MAX_WORKERS": ("analysis", "max_workers", int),
    "BLACKWELL_LOG_LEVEL": ("logging", "level", str),
    "BLACKWELL_REPORT_FORMAT": ("report", "format", str),
}


class ConfigLoader:
    """Loads and validates toolkit configuration."""

    def __init__(self, schema_path: Optional[Path] = None):
        """
        Initialize config loader.

        Args:
            schema_path: Path to JSON schema file. If None, uses default location.
        """
        if schema_path is None:
            schema_path = CONFIG_DIR / "schema.json"

        self.schema_path = schema_path
        self.schema = self._load_schema()

    def _load_schema(self) -> Dict[str, Any]:
        """Load JSON schema from file."""
        if not self.schema_path.exists():
            raise ConfigError(f"Schema file not found: {self.schema_path}")

        try:
            with open(self.schema_path, 'r') as f:
                return json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Invalid JSON schema: {e}")

    def load(self, config_path: Optional[Path]) -> ToolkitConfig:
        """
        Load and validate configuration from a YAML file.

        Args:
            config_path: Path to settings.yaml, or None for built-in defaults

        Returns:
            ToolkitConfig object

        Raises:
            ConfigError: If configuration is invalid
        """
        config_data = self._load_yaml(config_path) if config_path is not None else {}

        load_dotenv(find_dotenv(usecwd=True))
        config_data = self._apply_env_overrides(config_data)

        self._validate_schema(config_data)

        config = self._build_config_from_dict(config_data)

        errors = config.validate_basic()
        if errors:
            raise ConfigError("Configuration validation failed:\n  - " + "\n  - ".join(errors))

        return config

    def _load_yaml(self, config_path: Path) -> Dict[str, Any]:
        """Load YAML configuration file."""
        if not config_path.exists():
            raise ConfigError(f"Configuration file not found: {config_path}")

        try:
            with open(config_path, 'r') as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"Invalid YAML syntax: {e}")
        if data is None:
            return {}
        if not isinstance(data, dict):
            raise ConfigError("Configuration must be a YAML object/dictionary")
        return data

    def _validate_schema(self, config_data: Dict[str, Any]) -> None:
        """Validate configuration against JSON schema."""
        try:
            jsonschema.validate(instance=config_data, schema=self.schema)
        except ValidationError as e:
            path = " -> ".join(str(p) for p in e.path) if e.path else "root"
            raise ConfigError(f"Configuration validation error at {path}: {e.message}")

    def _apply_env_overrides(self, config_data: Dict[str, Any]) -> Dict[str, Any]:
        """
        Apply environment variable overrides to configuration.

        Examples:
            BLACKWELL_PARALLEL=true
            BLACKWELL_POLICY_GUARD=5000
            BLACKWELL_LOG_LEVEL=DEBUG
        """
        for name, (section, key, convert) in ENV_OVERRIDES.items():
            raw = os.getenv(name)
            if not raw:
                continue
            try:
                value = convert(raw)
            except ValueError:
                raise ConfigError(f"Invalid value for {name}: {raw!r}")
            config_data.setdefault(section, {})[key] = value
            logger.debug(f"Override {section}.{key} from {name}")
        return config_data

    def _build_config_from_dict(self, data: Dict[str, Any]) -> ToolkitConfig:
        """Convert dictionary to ToolkitConfig dataclass."""
        return ToolkitConfig(
            analysis=AnalysisSettings(**data.get("analysis", {})),
            solvers=SolverSettings(**data.get("solvers", {})),
            io=IoSettings(**data.get("io", {})),
            report=ReportSettings(**data.get("report", {})),
            logging=LoggingConfig(**data.get("logging", {})),
        )


def load_config(config_path: Optional[Path] = None) -> ToolkitConfig:
    """
    Convenience function to load configuration.

    Args:
        config_path: Path to a settings file. If None, uses config/settings.yaml
            when present and the built-in defaults otherwise.

    Raises:
        ConfigError: If configuration is invalid
    """
    if config_path is None:
        default = CONFIG_DIR / "settings.yaml"
        config_path = default if default.exists() else None

    loader = ConfigLoader()
    return loader.load(config_path)
