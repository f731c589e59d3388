"""Configuration data models for the Blackwell toolkit."""

from dataclasses import dataclass, field
from typing import List, Optional


@dataclass
class AnalysisSettings:
    """Guards and execution settings for breakpoint analysis."""
    policy_guard: int = 10 ** 6
    vertex_guard: int = 10 ** 4
    parallel: bool = False
    max_workers: Optional[int] = None
    certificate_width_bits: int = 64


@dataclass
class SolverSettings:
    """Floating-point solver settings."""
    float_tolerance: float = 1e-12
    max_iterations: int = 100000


@dataclass
class IoSettings:
    """Instance file parsing options."""
    rationalize_floats: bool = False
    max_denominator: int = 10 ** 6


@dataclass
class ReportSettings:
    format: str = "text"
    decimal_digits: int = 30
    plot_grid: int = 101


@dataclass
class LoggingConfig:
    """Logging configuration."""
    level: str = "INFO"
    console: bool = True

    def get_log_level(self) -> str:
        """Get logging level."""
        return self.level.upper()


@dataclass
class ToolkitConfig:
    """Complete toolkit configuration."""
    analysis: AnalysisSettings = field(default_factory=AnalysisSettings)
    solvers: SolverSettings = field(default_factory=SolverSettings)
    io: IoSettings = field(default_factory=IoSettings)
    report: ReportSettings = field(default_factory=ReportSettings)
    logging: LoggingConfig = field(default_factory=LoggingConfig)

    def validate_basic(self) -> List[str]:
        """
        Perform basic validation of configuration values.
        Returns list of error messages (empty if valid).
        """
        errors = []

        if self.analysis.policy_guard < 1:
            errors.append("policy_guard must be at least 1")
        if self.analysis.vertex_guard < 1:
            errors.append("vertex_guard must be at least 1")
        if self.analysis.max_workers is not None and self.analysis.max_workers < 1:
            errors.append("max_workers must be at least 1")
        if self.analysis.certificate_width_bits < 1:
            errors.append("certificate_width_bits must be at least 1")

        if self.solvers.float_tolerance <= 0:
            errors.append("float_tolerance must be positive")
        if self.solvers.max_iterations < 1:
            errors.append("max_iterations must be at least 1")

        if self.io.max_denominator < 1:
            errors.append("max_denominator must be at least 1")

        # Report formats are checked against the renderer registry at use time
        if self.report.decimal_digits < 1:
            errors.append("decimal_digits must be at least 1")
        if self.report.plot_grid < 1:
            errors.append("plot_grid must be at least 1")

        valid_levels = {"DEBUG", "INFO", "WARNING", "ERROR"}
        if self.logging.level.upper() not in valid_levels:
            errors.append(f"Invalid log level: {self.logging.level}")

        return errors
