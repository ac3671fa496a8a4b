"""
Configuration settings for Open LBP.
"""
from typing import Tuple

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="OPENLBP_",
        case_sensitive=True,
        extra="ignore",
    )

    # Application
    APP_NAME: str = "Open LBP"
    APP_VERSION: str = "0.1.0"
    DEBUG: bool = False

    # Logging
    LOG_LEVEL: str = "WARNING"  # stderr is shared with CLI diagnostics
    LOG_FORMAT: str = "json"

    # Concurrency
    MAX_WORKERS: int = Field(default=4, ge=1)

    # Descriptor defaults (3x3 / (8,1) uniform face-and-texture pipeline)
    DEFAULT_P: int = Field(default=8, ge=4, le=24)
    DEFAULT_R: float = Field(default=1.0, gt=0)
    DEFAULT_MAPPING: str = "u2"
    DEFAULT_GRID: str = "1x1"

    # Learning defaults
    DEFAULT_K: int = Field(default=1, ge=1)
    DEFAULT_DISTANCE: str = "chi-square"
    KMEANS_MAX_ITER: int = Field(default=100, ge=1)

    # Output
    CSV_PRECISION: int = Field(default=17, ge=1, le=17)

    @field_validator("LOG_FORMAT")
    @classmethod
    def _check_log_format(cls, value: str) -> str:
        if value not in ("json", "console"):
            raise ValueError("LOG_FORMAT must be 'json' or 'console'")
        return value

    @property
    def default_grid(self) -> Tuple[int, int]:
        gx, _, gy = self.DEFAULT_GRID.lower().partition("x")
        return int(gx), int(gy)


settings = Settings()
