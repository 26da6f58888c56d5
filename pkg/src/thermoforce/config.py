"""Process-wide settings for thermoforce."""

from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from thermoforce.quadrature import QuadratureSpec


class ThermoforceSettings(BaseSettings):
    """
    Settings shared by every command.

    All settings can be provided via environment variables (prefixed with
    THERMOFORCE_) or a .env file. Per-run physics lives in the run
    configuration file instead.
    """

    model_config = SettingsConfigDict(
        env_prefix="THERMOFORCE_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
    )

    log_level: str = Field(default="INFO", description="Logging level")

    # Quadrature defaults
    rel_tol: float = Field(default=1e-9, description="Default relative quadrature tolerance")
    abs_tol: float = Field(
        default=1e-12, description="Default absolute tolerance, as a fraction of the integral of |f|"
    )
    max_subdivisions: int = Field(default=200, description="Adaptive panel limit")

    # Processing
    workers: int = Field(default=1, description="Worker processes for scans (1 runs in-process)")
    default_seed: Optional[int] = Field(
        default=None, description="Seed used when neither the config nor --seed gives one"
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate that log level is valid."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        v_upper = v.upper()
        if v_upper not in valid_levels:
            raise ValueError(f"Log level must be one of {valid_levels}")
        return v_upper

    @field_validator("rel_tol")
    @classmethod
    def validate_rel_tol(cls, v: float) -> float:
        """Validate that the relative tolerance lies in (0, 1)."""
        if not 0.0 < v < 1.0:
            raise ValueError("rel_tol must lie strictly between 0 and 1")
        return v

    @field_validator("abs_tol")
    @classmethod
    def validate_abs_tol(cls, v: float) -> float:
        """Validate that the absolute tolerance is non-negative."""
        if v < 0.0:
            raise ValueError("abs_tol must be non-negative")
        return v

    @field_validator("max_subdivisions", "workers")
    @classmethod
    def validate_positive_int(cls, v: int) -> int:
        """Validate that integer fields are positive."""
        if v <= 0:
            raise ValueError("Value must be positive")
        return v

    def quadrature_spec(self) -> QuadratureSpec:
        """Circuit-integral tolerances built from these settings."""
        return QuadratureSpec(
            rel_tol=self.rel_tol,
            abs_tol=self.abs_tol,
            max_subdivisions=self.max_subdivisions,
            relative_to_l1=True,
        )
