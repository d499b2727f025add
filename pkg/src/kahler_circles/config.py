"""Configuration management for kahler-circles."""

from pathlib import Path
from typing import Optional

from dotenv import dotenv_values
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Keys accepted in flat key=value config files
CONFIG_KEYS = (
    "metric",
    "family",
    "samples",
    "seed",
    "tol",
    "step",
    "steps",
    "time",
    "out",
    "format",
)


class Settings(BaseSettings):
    """Application defaults via environment variables."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Sampling
    seed: int = Field(default=7, alias="KAHLER_CIRCLES_SEED")
    samples: int = Field(default=20, alias="KAHLER_CIRCLES_SAMPLES")

    # Numerics
    integration_steps: int = Field(default=2048, alias="KAHLER_CIRCLES_STEPS")
    fd_step: float = Field(default=1e-4, alias="KAHLER_CIRCLES_FD_STEP")

    # Output
    output_dir: Path = Field(default=Path("."), alias="KAHLER_CIRCLES_OUTPUT_DIR")


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Run defaults (seed, samples, RK4 steps, FD step, report directory).

    Read from KAHLER_CIRCLES_* variables and ./.env on first use; later calls
    return the same instance until :func:`load_settings` replaces it.
    """
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def load_settings(env_file: Optional[Path] = None) -> Settings:
    """Re-read the run defaults, from env_file instead of ./.env when given.

    Raises:
        FileNotFoundError: If env_file is given but does not exist
    """
    global _settings
    if env_file is None:
        _settings = Settings()
    elif not env_file.is_file():
        raise FileNotFoundError(f"Settings file not found: {env_file}")
    else:
        _settings = Settings(_env_file=env_file)
    return _settings


def load_config_file(path: Path) -> dict[str, str]:
    """Read a flat key=value config file.

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: If the file contains an unknown key
    """
    if not path.is_file():
        raise FileNotFoundError(f"Config file not found: {path}")
    values = {key.strip().lower(): value for key, value in dotenv_values(path).items()}
    unknown = sorted(set(values) - set(CONFIG_KEYS))
    if unknown:
        raise ValueError(
            f"Unknown config key(s): {', '.join(unknown)}. "
            f"Supported keys: {', '.join(CONFIG_KEYS)}"
        )
    return {key: value for key, value in values.items() if value is not None}
