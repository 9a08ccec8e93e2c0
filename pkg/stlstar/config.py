"""Toolkit configuration"""
from pydantic_settings import BaseSettings
from functools import lru_cache
from typing import List


class Settings(BaseSettings):
    """Settings loaded from STLSTAR_* environment variables or .env"""

    # Logging
    log_level: str = "INFO"
    log_file: str = "logs/stlstar.log"  # empty string disables the file sink
    log_rotation: str = "500 MB"

    # Monitoring
    default_mode: str = "interval"
    early_stop: bool = False
    default_epsilon: float = 0.1

    # Conservative range: above this many environment tuples fall back to interval bounds
    exact_range_limit: int = 2_000_000

    # Brute-force oracle refuses longer traces
    oracle_max_length: int = 30

    # Trace generators
    generator_horizon: float = 50.0
    generator_seed: int = 0

    # Benchmark
    bench_sizes: List[int] = [500, 1000]
    bench_repetitions: int = 1
    bench_formulas: List[str] = ["phi1", "phi2", "phi3"]

    class Config:
        env_prefix = "STLSTAR_"
        env_file = ".env"
        case_sensitive = False
        extra = "allow"


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()
