"""
Run configuration for the command line.
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Any, List, Mapping, Optional

from dotenv import load_dotenv

from modules.errors import ConfigError

# Configure logging
logger = logging.getLogger(__name__)

THREADS_ENV = "PASTELAB_THREADS"
OUTPUT_FORMATS = ("json", "dot", "text")


def default_threads() -> int:
    return min(8, os.cpu_count() or 1)


@dataclass
class RunConfig:
    """Settings for one CLI invocation."""
    command: str
    inputs: List[str] = field(default_factory=list)
    level: int = 4
    budget: int = 1_000_000
    output_format: str = "json"
    seed: int = 0
    count: int = 1
    max_faces: int = 4
    out: Optional[str] = None
    threads: int = field(default_factory=default_threads)
    log_level: str = "WARNING"

    def validate(self) -> "RunConfig":
        """
        Check the configuration invariants.

        Raises:
            ConfigError: if a value is out of range
        """
        if self.level < 0:
            raise ConfigError(f"level must be >= 0, got {self.level}", level=self.level)
        if self.budget < 1:
            raise ConfigError(f"budget must be >= 1, got {self.budget}", budget=self.budget)
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"unknown format {self.output_format!r}", format=self.output_format)
        if self.count < 1:
            raise ConfigError(f"count must be >= 1, got {self.count}", count=self.count)
        if self.max_faces < 0:
            raise ConfigError(f"max faces must be >= 0, got {self.max_faces}", max_faces=self.max_faces)
        if self.threads < 1:
            raise ConfigError(f"thread count must be >= 1, got {self.threads}", threads=self.threads)
        return self


def threads_from_env(environ: Optional[Mapping[str, str]] = None) -> Optional[int]:
    """
    Worker count from PASTELAB_THREADS, if set.

    Raises:
        ConfigError: if the variable is not a positive integer
    """
    environ = os.environ if environ is None else environ
    raw = environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if value < 1:
        raise ConfigError(f"{THREADS_ENV} must be >= 1, got {value}")
    return value


def load_run_config(command: str, **options: Any) -> RunConfig:
    """
    Build a validated RunConfig from parsed options and the environment.

    Args:
        command: subcommand name
        **options: RunConfig fields; None values keep the defaults

    Returns:
        RunConfig
    """
    load_dotenv()
    values = {k: v for k, v in options.items() if v is not None}
    config = RunConfig(command=command, **values)
    threads = threads_from_env()
    if threads is not None:
        config.threads = threads
    logger.debug(f"Run configuration: {config}")
    return config.validate()
