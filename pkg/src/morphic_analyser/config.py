"""
Configuration management for the morphic analyser.
Uses pydantic-settings for environment variable validation.
"""

from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Run configuration loaded from environment variables (MORPHIC_*) or a .env file."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        populate_by_name=True,
        extra="ignore",
    )

    # Application
    app_name: str = Field(default="Morphic Analyser", alias="MORPHIC_APP_NAME")
    app_version: str = Field(default="1.0.0", alias="MORPHIC_APP_VERSION")
    log_level: str = Field(default="INFO", alias="MORPHIC_LOG_LEVEL")

    # Construction caps
    order_cap: int = Field(default=65536, alias="MORPHIC_ORDER_CAP")
    axiom_exhaustive_cap: int = Field(default=256, alias="MORPHIC_AXIOM_EXHAUSTIVE_CAP")

    # Decider caps and sampling
    full_scan_cap: int = Field(default=4096, alias="MORPHIC_FULL_SCAN_CAP")
    sample_count: int = Field(default=100000, alias="MORPHIC_SAMPLE_COUNT")
    seed: int = Field(default=0, alias="MORPHIC_SEED")

    # Quotient-torsion sampling bounds
    denominator_bound: int = Field(default=1000000, alias="MORPHIC_DENOMINATOR_BOUND")
    degree_bound: int = Field(default=12, alias="MORPHIC_DEGREE_BOUND")

    # Output
    output_format: str = Field(default="json", alias="MORPHIC_OUTPUT_FORMAT")

    @field_validator(
        "order_cap",
        "axiom_exhaustive_cap",
        "full_scan_cap",
        "sample_count",
        "denominator_bound",
        "degree_bound",
    )
    @classmethod
    def validate_positive(cls, v: int) -> int:
        """Ensure bounds are positive."""
        if v < 1:
            raise ValueError("Bounds and caps must be positive")
        return v

    @field_validator("output_format")
    @classmethod
    def validate_output_format(cls, v: str) -> str:
        """Ensure the output format is known."""
        v = v.lower()
        if v not in ("text", "json"):
            raise ValueError("Output format must be 'text' or 'json'")
        return v


# Global settings instance
settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get or create settings instance."""
    global settings
    if settings is None:
        settings = Settings()
    return settings


def load_settings(**overrides) -> Settings:
    """Force reload settings from environment, applying keyword overrides."""
    global settings
    settings = Settings(**overrides)
    return settings
