"""Configuration management using environment variables.

This module loads configuration from .env file and provides
typed access to configuration values with sensible defaults.

Author: FPU Waves maintainers
Created: 2026-10-17
Version: 1.0.0
License: MIT
"""

import os
from pathlib import Path
from typing import Optional, List
from dotenv import load_dotenv

# Load .env file from project root
load_dotenv()


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).lower() == "true"


class Config:
    """Process-wide settings for the FPU wave toolkit.

    Loads configuration from environment variables with fallback defaults.
    All values are loaded once at module import time. Run-specific choices
    (delta sweep, grid, weight policy) live in ``models.run_config.RunConfig``
    and take these values as defaults.

    Example:
        >>> from utils.config import config
        >>> print(config.OUTPUT_ROOT)
        outputs
        >>> print(config.DEFAULT_TOL)
        1e-08
    """

    # Output root honored by the CLI
    OUTPUT_ROOT: Path = Path(os.getenv("FPU_OUTPUT_ROOT", "outputs"))

    # Model and grid defaults
    DEFAULT_M: float = float(os.getenv("DEFAULT_M", "2"))
    DEFAULT_HALF_WIDTH: float = float(os.getenv("DEFAULT_HALF_WIDTH", "6"))
    DEFAULT_NODES_PER_HALF: int = int(os.getenv("DEFAULT_NODES_PER_HALF", "256"))
    DEFAULT_DELTAS: List[float] = [
        float(d) for d in os.getenv("DEFAULT_DELTAS", "0.2,0.1,0.05,0.025").split(",")
    ]

    # Solver defaults
    DEFAULT_TOL: float = float(os.getenv("DEFAULT_TOL", "1e-8"))
    DEFAULT_MAX_ITER: int = int(os.getenv("DEFAULT_MAX_ITER", "20000"))
    DEFAULT_ODE_STEP: float = float(os.getenv("DEFAULT_ODE_STEP", "1e-3"))
    DEFAULT_XBAR_MAX: float = float(os.getenv("DEFAULT_XBAR_MAX", "50"))
    DEFAULT_A_FRACTION: float = float(os.getenv("DEFAULT_A_FRACTION", "0.5"))
    DEFAULT_SEED: int = int(os.getenv("DEFAULT_SEED", "12345"))

    # Parallel Processing
    ENABLE_PARALLEL: bool = _env_bool("ENABLE_PARALLEL", "true")
    MAX_WORKERS: int = int(os.getenv("MAX_WORKERS", "3"))

    # Logging Configuration
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")
    LOG_FILE: Optional[str] = os.getenv("LOG_FILE", "logs/fpu_waves.log") or None
    LOG_FORMAT: str = os.getenv(
        "LOG_FORMAT",
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )

    @classmethod
    def output_dir(cls, name: Optional[str] = None) -> Path:
        """Resolve an output directory below the output root.

        Args:
            name: Optional subdirectory name. Absolute paths are returned unchanged.

        Returns:
            Path to the output directory (not created).

        Example:
            >>> Config.output_dir("sweep_m2")
            PosixPath('outputs/sweep_m2')
        """
        if name is None:
            return cls.OUTPUT_ROOT
        path = Path(name)
        if path.is_absolute():
            return path
        return cls.OUTPUT_ROOT / path

    @classmethod
    def validate(cls) -> List[str]:
        """Validate configuration and return list of issues.

        Returns:
            List of validation error messages. Empty list if all valid.

        Example:
            >>> errors = Config.validate()
            >>> if errors:
            ...     print("Configuration errors:", errors)
        """
        errors = []

        if cls.DEFAULT_M <= 1:
            errors.append(f"DEFAULT_M must be > 1, got {cls.DEFAULT_M}")

        if cls.DEFAULT_NODES_PER_HALF < 32:
            errors.append(f"DEFAULT_NODES_PER_HALF must be >= 32, got {cls.DEFAULT_NODES_PER_HALF}")

        if cls.DEFAULT_HALF_WIDTH < 4:
            errors.append(f"DEFAULT_HALF_WIDTH must be >= 4, got {cls.DEFAULT_HALF_WIDTH}")

        if any(not 0 < d < 0.5 for d in cls.DEFAULT_DELTAS):
            errors.append(f"DEFAULT_DELTAS must lie in (0, 1/2), got {cls.DEFAULT_DELTAS}")

        if cls.DEFAULT_TOL <= 0:
            errors.append(f"DEFAULT_TOL must be > 0, got {cls.DEFAULT_TOL}")

        if not 0 < cls.DEFAULT_A_FRACTION < 1:
            errors.append(f"DEFAULT_A_FRACTION must be in (0, 1), got {cls.DEFAULT_A_FRACTION}")

        if cls.MAX_WORKERS < 1:
            errors.append(f"MAX_WORKERS must be >= 1, got {cls.MAX_WORKERS}")

        return errors

    @classmethod
    def print_config(cls):
        """Print current configuration (for debugging).

        Example:
            >>> Config.print_config()
            Configuration:
              OUTPUT_ROOT: outputs
            ...
        """
        print("Configuration:")
        print(f"  OUTPUT_ROOT: {cls.OUTPUT_ROOT}")
        print(f"  DEFAULT_M: {cls.DEFAULT_M}")
        print(f"  DEFAULT_HALF_WIDTH: {cls.DEFAULT_HALF_WIDTH}")
        print(f"  DEFAULT_NODES_PER_HALF: {cls.DEFAULT_NODES_PER_HALF}")
        print(f"  DEFAULT_DELTAS: {cls.DEFAULT_DELTAS}")
        print(f"  DEFAULT_TOL: {cls.DEFAULT_TOL}")
        print(f"  DEFAULT_MAX_ITER: {cls.DEFAULT_MAX_ITER}")
        print(f"  DEFAULT_ODE_STEP: {cls.DEFAULT_ODE_STEP}")
        print(f"  DEFAULT_XBAR_MAX: {cls.DEFAULT_XBAR_MAX}")
        print(f"  ENABLE_PARALLEL: {cls.ENABLE_PARALLEL}")
        print(f"  MAX_WORKERS: {cls.MAX_WORKERS}")
        print(f"  LOG_LEVEL: {cls.LOG_LEVEL}")


# Global config instance
config = Config()


# Validate configuration on import
_validation_errors = config.validate()
if _validation_errors:
    import warnings
    for error in _validation_errors:
        warnings.warn(f"Configuration warning: {error}")
