"""
Process-wide configuration for shaketab.
Loads settings from SHAKETAB_* environment variables (and an optional .env file).
Per-scenario parameters live in scenario files, see core.schemas.ScenarioConfig.
"""

from pathlib import Path
from typing import Literal, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


LOG_LEVELS = {"quiet": "WARNING", "info": "INFO", "debug": "DEBUG"}


class Settings(BaseSettings):
    """Global process settings."""

    model_config = SettingsConfigDict(
        env_prefix="SHAKETAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # ============ LOGGING ============
    LOG: Literal["quiet", "info", "debug"] = Field(
        "info", description="Console verbosity: quiet | info | debug"
    )
    LOG_JSON: bool = Field(False, description="Emit JSON lines instead of coloured text")
    LOG_FILE: Optional[Path] = Field(None, description="Optional log file path")

    # ============ BATCH ============
    JOBS: int = Field(1, ge=1, description="Default parallelism for `shaketab batch`")

    # ============ OUTPUT ============
    BODE_POINTS: int = Field(200, ge=2, description="Default grid size for `shaketab bode`")

    @field_validator("LOG", mode="before")
    @classmethod
    def _lower_log(cls, value):
        return value.strip().lower() if isinstance(value, str) else value

    @property
    def log_level(self) -> str:
        return LOG_LEVELS[self.LOG]

    def validate_paths(self) -> bool:
        """Validate filesystem settings at startup."""
        if self.LOG_FILE is not None and self.LOG_FILE.is_dir():
            raise RuntimeError(f"SHAKETAB_LOG_FILE points at a directory: {self.LOG_FILE}")
        return True


# Singleton instance
settings = Settings()
