"""Configuration module for the Blackwell toolkit."""

from .loader import load_config, ConfigLoader, ConfigError
from .models import (
    ToolkitConfig,
    AnalysisSettings,
    SolverSettings,
    IoSettings,
    ReportSettings,
    LoggingConfig,
)

__all__ = [
    "load_config",
    "ConfigLoader",
    "ConfigError",
    "ToolkitConfig",
    "AnalysisSettings",
    "SolverSettings",
    "IoSettings",
    "ReportSettings",
    "LoggingConfig",
]
