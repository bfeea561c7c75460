"""Configuration handling - env vars, .env and config file."""

import os
from pathlib import Path
from typing import Optional

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

from .schema import INV_SQRT2, Ordering


class Config(BaseModel):
    """Application configuration."""

    default_q_r: float = Field(default=INV_SQRT2, description="q_R used when --qr is omitted")
    grid_n: int = Field(default=2001, ge=3, description="Points on the gamma grid")
    refine_tol: float = Field(default=1e-8, gt=0, description="Bracket width for variation points")
    tol_alpha: float = Field(default=1e-4, gt=0, description="Bisection tolerance of the threshold search")
    threshold_scan_points: int = Field(default=64, ge=2, description="Alphas in the monotonicity pre-scan")
    ordering: Ordering = Field(default=Ordering.PHYSICAL, description="Mode ordering for the region-II trace")
    verify_draws: int = Field(default=1000, ge=1, description="Random draws per verify check")
    verify_seed: int = Field(default=2011, description="Seed of the verify random generator")
    log_level: str = Field(default="WARNING", description="Log level when --verbose is not given")

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, v: str) -> str:
        level = v.strip().upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level: {v}")
        return level


ENV_MAPPINGS = {
    "FERMAMP_DEFAULT_Q_R": "default_q_r",
    "FERMAMP_GRID_N": "grid_n",
    "FERMAMP_REFINE_TOL": "refine_tol",
    "FERMAMP_TOL_ALPHA": "tol_alpha",
    "FERMAMP_THRESHOLD_SCAN_POINTS": "threshold_scan_points",
    "FERMAMP_ORDERING": "ordering",
    "FERMAMP_VERIFY_DRAWS": "verify_draws",
    "FERMAMP_VERIFY_SEED": "verify_seed",
    "FERMAMP_LOG_LEVEL": "log_level",
}


def load_config(config_path: Optional[Path] = None) -> Config:
    """Load configuration from file and environment.

    Priority (highest to lowest):
    1. Environment variables (FERMAMP_GRID_N, etc.), including a .env in CWD
    2. Config file (if exists)
    3. Built-in defaults

    Args:
        config_path: Optional path to fermamp.yaml. If None, looks in CWD.

    Returns:
        Config object with merged settings.
    """
    config_data = {}

    # Load from file if it exists
    if config_path is None:
        config_path = Path.cwd() / "fermamp.yaml"

    if config_path.exists():
        with open(config_path, "r", encoding="utf-8") as f:
            file_data = yaml.safe_load(f) or {}
            config_data.update(file_data)

    # .env never overrides variables already set in the process
    load_dotenv(Path.cwd() / ".env", override=False)

    for env_var, config_key in ENV_MAPPINGS.items():
        value = os.environ.get(env_var)
        if value:
            config_data[config_key] = value

    return Config.model_validate(config_data)
