"""
Configuration management for symprod
"""

import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

from symprod.utils.errors import ConfigurationError

logger = logging.getLogger(__name__)


@dataclass
class LimitsConfig:
    """Enumeration limits"""

    partition_limit: int = 10
    pairing_limit: int = 4
    permutation_limit: int = 9
    inductive_limit: int = 12


@dataclass
class ScalarConfig:
    """Scalar mode and float-mode tolerances"""

    mode: str = "exact"  # exact, float
    precision: int = 128
    tolerance: float = 1e-20


@dataclass
class ReconstructionConfig:
    """Point recovery settings"""

    seed: int = 0
    max_retries: int = 8
    cluster_tolerance: float = 1e-8
    multiplicity_tolerance: float = 1e-6
    verify_tolerance: float = 1e-12
    root_max_steps: int = 200
    root_extra_precision: int = 64


@dataclass
class SymprodConfig:
    """Main configuration class"""

    log_level: str = "WARNING"
    threads: int = 1

    limits: LimitsConfig = field(default_factory=LimitsConfig)
    scalars: ScalarConfig = field(default_factory=ScalarConfig)
    reconstruction: ReconstructionConfig = field(
        default_factory=ReconstructionConfig
    )

    @classmethod
    def load(cls, config_file: Optional[str] = None) -> "SymprodConfig":
        """Load configuration from file and environment variables"""
        config = cls()

        config_path: Optional[Path] = None
        if config_file:
            config_path = Path(config_file)
            if not config_path.exists():
                raise ConfigurationError(f"Config file not found: {config_file}")
        else:
            for path in (
                Path("./symprod.json"),
                Path.home() / ".symprod" / "config.json",
            ):
                if path.exists():
                    config_path = path
                    break

        if config_path is not None:
            try:
                with open(config_path, "r", encoding="utf-8") as f:
                    config._update_from_dict(json.load(f))
            except (json.JSONDecodeError, IOError) as e:
                raise ConfigurationError(
                    f"Could not load config file {config_path}: {e}"
                ) from e

        config._load_from_env()
        config._validate()
        return config

    def _update_from_dict(self, data: Dict[str, Any]) -> None:
        """Update configuration from dictionary"""
        for key, value in data.items():
            if not hasattr(self, key):
                logger.warning("Ignoring unknown config key %r", key)
                continue
            attr = getattr(self, key)
            if isinstance(attr, (LimitsConfig, ScalarConfig, ReconstructionConfig)):
                if isinstance(value, dict):
                    for nested_key, nested_value in value.items():
                        if hasattr(attr, nested_key):
                            setattr(attr, nested_key, nested_value)
            else:
                setattr(self, key, value)

    def _load_from_env(self) -> None:
        """Load configuration from environment variables"""
        try:
            self.log_level = os.getenv("SYMPROD_LOG_LEVEL", self.log_level)
            self.threads = int(os.getenv("SYMPROD_THREADS", str(self.threads)))

            self.scalars.mode = os.getenv("SYMPROD_MODE", self.scalars.mode)
            self.scalars.precision = int(
                os.getenv("SYMPROD_PRECISION", str(self.scalars.precision))
            )
            self.scalars.tolerance = float(
                os.getenv("SYMPROD_TOLERANCE", str(self.scalars.tolerance))
            )

            self.reconstruction.seed = int(
                os.getenv("SYMPROD_SEED", str(self.reconstruction.seed))
            )
            self.reconstruction.max_retries = int(
                os.getenv("SYMPROD_MAX_RETRIES", str(self.reconstruction.max_retries))
            )

            self.limits.partition_limit = int(
                os.getenv("SYMPROD_PARTITION_LIMIT", str(self.limits.partition_limit))
            )
            self.limits.permutation_limit = int(
                os.getenv(
                    "SYMPROD_PERMUTATION_LIMIT", str(self.limits.permutation_limit)
                )
            )
            self.limits.pairing_limit = int(
                os.getenv("SYMPROD_PAIRING_LIMIT", str(self.limits.pairing_limit))
            )
            self.limits.inductive_limit = int(
                os.getenv("SYMPROD_INDUCTIVE_LIMIT", str(self.limits.inductive_limit))
            )
        except ValueError as e:
            raise ConfigurationError(f"Invalid environment override: {e}") from e

    def _validate(self) -> None:
        """Validate configuration"""
        if self.scalars.mode not in ("exact", "float"):
            raise ConfigurationError(f"Invalid scalar mode: {self.scalars.mode}")
        if self.scalars.precision < 53:
            raise ConfigurationError(
                f"Precision must be at least 53 bits, got {self.scalars.precision}"
            )
        if self.scalars.tolerance <= 0:
            raise ConfigurationError("Tolerance must be positive")
        if self.threads < 1:
            raise ConfigurationError(f"Invalid thread count: {self.threads}")
        if self.reconstruction.max_retries < 1:
            raise ConfigurationError("max_retries must be at least 1")
        for name in (
            "partition_limit",
            "pairing_limit",
            "permutation_limit",
            "inductive_limit",
        ):
            if getattr(self.limits, name) < 1:
                raise ConfigurationError(f"{name} must be positive")
        if self.log_level.upper() not in logging._nameToLevel:
            raise ConfigurationError(f"Unknown log level: {self.log_level}")

    def tolerances(self) -> Dict[str, float]:
        """Tolerances in effect, for run reports"""
        return {
            "vanishing": self.scalars.tolerance,
            "cluster": self.reconstruction.cluster_tolerance,
            "multiplicity": self.reconstruction.multiplicity_tolerance,
            "verify": self.reconstruction.verify_tolerance,
        }
