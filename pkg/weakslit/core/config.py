from functools import lru_cache
from typing import Tuple

from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load the environment variables from .env file
load_dotenv()


class Settings(BaseSettings):
    PROJECT_NAME: str = "weakslit"
    VERSION: str = "1.0.0"

    # Reproducibility
    WEAKSLIT_SEED: int = 42

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    # Output
    OUTPUT_FORMAT: str = "csv"
    FLOAT_DIGITS: int = 17
    TRAJECTORY_STEPS: int = 101

    # Relative-volume scan conventions
    RVOL_WINDOW: int = 20
    RVOL_THRESHOLD: float = 2.0
    MERGE_GAP: int = 0

    # Kernel quadrature
    QUADRATURE_RTOL: float = 1e-8
    QUADRATURE_SIGMAS: float = 10.0
    QUADRATURE_NODES: int = 16
    QUADRATURE_MAX_DOUBLINGS: int = 20

    # Monte Carlo
    MC_BATCH_SIZE: int = 1_000_000
    MC_WORKERS: int = 4

    # Oracle tolerances
    PDE_TOLERANCE: float = 1e-3
    PDE_RATIO_RANGE: Tuple[float, float] = (3.5, 4.5)
    MASS_TOLERANCE: float = 1e-4
    CHI2_ALPHA: float = 1e-3
    BOUNDARY_WARN_RATIO: float = 1e-8

    # Quantum-mechanics reference
    QM_POLE_TOLERANCE: float = 1e-12

    model_config = SettingsConfigDict(
        case_sensitive=True,
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


# Create a global settings instance
settings = get_settings()
