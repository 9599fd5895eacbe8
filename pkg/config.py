"""
Configuration for solver caps, randomized construction and logging.
Values come from environment variables (optionally a .env file).
"""

import logging
import os
from pathlib import Path

from dotenv import load_dotenv

ENV_FILE = Path(__file__).resolve().parent / ".env"
load_dotenv(ENV_FILE)


def _env_int(name, default):
    return int(os.getenv(name, str(default)))


def _env_bool(name, default):
    return os.getenv(name, "true" if default else "false").strip().lower() in ("1", "true", "yes", "on")


class Config:
    """Application configuration"""

    # ===========================================
    # SOLVER CAPS
    # ===========================================

    # Power-set enumeration in build_program (2^n - 1 variables)
    SUBSET_CAP = _env_int("ICW_SUBSET_CAP", 16)

    # Recursive programs (memoized over induced subgraphs)
    RECURSIVE_CAP = _env_int("ICW_RECURSIVE_CAP", 10)

    # ===========================================
    # ORACLE CAPS
    # ===========================================

    PARTITION_CAP = _env_int("ICW_PARTITION_CAP", 8)
    MAIS_CAP = _env_int("ICW_MAIS_CAP", 20)
    MINRANK_CAP = _env_int("ICW_MINRANK_CAP", 65536)  # q^|E| matrices
    ILP_ENUM_CAP = _env_int("ICW_ILP_ENUM_CAP", 20)  # binary variables

    # ===========================================
    # RANDOMIZED CONSTRUCTION
    # ===========================================

    MIN_PRIME = _env_int("ICW_MIN_PRIME", 17)
    ALPHA_RETRIES = _env_int("ICW_ALPHA_RETRIES", 32)
    FIELD_GROWTH_LIMIT = _env_int("ICW_FIELD_GROWTH_LIMIT", 8)
    DEFAULT_SEED = _env_int("ICW_DEFAULT_SEED", 0)

    # Dominated-set elimination (never changes optima)
    PRUNE_DOMINATED = _env_bool("ICW_PRUNE_DOMINATED", True)

    # ===========================================
    # LOGGING
    # ===========================================

    LOG_LEVEL = os.getenv("ICW_LOG_LEVEL", "WARNING")
    LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"

    # ===========================================
    # HELPER METHODS
    # ===========================================

    @classmethod
    def configure_logging(cls, level=None):
        """Install a single stream handler on the root logger"""
        level = (level or cls.LOG_LEVEL).upper()
        if level not in ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"):
            raise ValueError(f"Unknown log level: {level}")
        logging.basicConfig(level=level, format=cls.LOG_FORMAT, force=True)

    @classmethod
    def as_dict(cls):
        """Settings as a plain dict (for reports)"""
        return {
            "subset_cap": cls.SUBSET_CAP,
            "recursive_cap": cls.RECURSIVE_CAP,
            "partition_cap": cls.PARTITION_CAP,
            "mais_cap": cls.MAIS_CAP,
            "minrank_cap": cls.MINRANK_CAP,
            "ilp_enum_cap": cls.ILP_ENUM_CAP,
            "min_prime": cls.MIN_PRIME,
            "alpha_retries": cls.ALPHA_RETRIES,
            "field_growth_limit": cls.FIELD_GROWTH_LIMIT,
            "default_seed": cls.DEFAULT_SEED,
            "prune_dominated": cls.PRUNE_DOMINATED,
            "log_level": cls.LOG_LEVEL,
        }

    @classmethod
    def print_status(cls):
        """Print configuration status"""
        print("\nConfiguration Status:")
        print(f"{'[OK]' if ENV_FILE.exists() else '[SKIP]'} .env file: {'Loaded' if ENV_FILE.exists() else 'Not found (using environment/defaults)'}")
        for key, value in cls.as_dict().items():
            print(f"[OK] {key}: {value}")


if __name__ == "__main__":
    Config.print_status()
