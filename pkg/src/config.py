"""
Engine configuration

Values come from constructor arguments first, then HP_* environment
variables (a .env file is honoured), then built-in defaults.
"""
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from dotenv import load_dotenv

load_dotenv()

ENGINE_VERSION = "1.0.0"


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


@dataclass
class Settings:
    """
    Tunables shared by search, survey and the command line

    Any field left as None is filled from the environment in __post_init__.
    """
    oracle_max_length: Optional[int] = None
    survey_max_n: Optional[int] = None
    long_run_n: Optional[int] = None
    store_limit: Optional[int] = None
    workers: Optional[int] = None
    block_size: Optional[int] = None
    checkpoint_every: Optional[int] = None
    log_level: Optional[str] = None

    def __post_init__(self):
        if self.oracle_max_length is None:
            self.oracle_max_length = _env_int('HP_ORACLE_MAX_LENGTH', 14)
        if self.survey_max_n is None:
            self.survey_max_n = _env_int('HP_SURVEY_MAX_N', 20)
        if self.long_run_n is None:
            self.long_run_n = _env_int('HP_LONG_RUN_N', 15)
        if self.store_limit is None:
            self.store_limit = _env_int('HP_STORE_LIMIT', 16)
        if self.workers is None:
            self.workers = _env_int('HP_WORKERS', 1)
        if self.block_size is None:
            self.block_size = _env_int('HP_BLOCK_SIZE', 256)
        if self.checkpoint_every is None:
            self.checkpoint_every = _env_int('HP_CHECKPOINT_EVERY', 8)
        if self.log_level is None:
            self.log_level = os.getenv('HP_LOG_LEVEL', 'WARNING').upper()
        self.validate()

    def validate(self) -> None:
        """
        Check ranges

        Raises:
            ValueError: If a size or count is out of range
        """
        positive = {
            'oracle_max_length': self.oracle_max_length,
            'survey_max_n': self.survey_max_n,
            'long_run_n': self.long_run_n,
            'workers': self.workers,
            'block_size': self.block_size,
            'checkpoint_every': self.checkpoint_every,
        }
        for name, value in positive.items():
            if value < 1:
                raise ValueError(f"{name} must be positive, got {value}")
        if self.store_limit < 0:
            raise ValueError(f"store_limit must be non-negative, got {self.store_limit}")


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Process-wide settings built from the environment"""
    return Settings()
