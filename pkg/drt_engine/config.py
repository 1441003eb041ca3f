# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Run configuration shared by the command line and the notebook magics."""

import dataclasses
import json
import logging
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

from .channel.profiles import DEFAULT_DELAY_BIN, DEFAULT_DOPPLER_BIN, DEFAULT_TIME_BIN
from .channel.schedule import TcSchedule, parse_schedule
from .constants import GEOMETRIC_EPSILON, MAX_REFLECTIONS_CAP
from .drt.extrapolation import METHODS
from .errors import ConfigError
from .rt.paths import TraceConfig
from .validation.report import DEFAULT_SAMPLES

logger = logging.getLogger(__name__)

MODES = ("drt", "rt", "compare", "validate")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def default_threads() -> int:
    return os.cpu_count() or 1


@dataclass
class RunConfig:
    """Everything a `drt run` needs besides the scene itself."""

    scene: Optional[str] = None
    mode: str = "drt"
    span: float = 5.0
    step: float = 0.2
    tc: str = "auto"
    max_reflections: int = 2
    diffraction: bool = True
    scattering: bool = False
    combine_interactions: bool = True
    tile_size: float = 5.0
    doppler_bin: float = DEFAULT_DOPPLER_BIN
    time_bin: float = DEFAULT_TIME_BIN
    delay_bin: float = DEFAULT_DELAY_BIN
    threads: int = field(default_factory=default_threads)
    seed: int = 0
    samples: int = DEFAULT_SAMPLES
    out: str = "out"
    method: str = "exact"
    log_level: str = "WARNING"

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f"unknown run configuration keys: {', '.join(unknown)}")
        return cls(**values)

    @classmethod
    def from_json(cls, path: Union[str, Path]) -> "RunConfig":
        """Load a JSON run file.

        Raises:
            ConfigError: unreadable file, invalid JSON or unknown keys
        """
        try:
            with open(path, "r", encoding="utf-8") as f:
                values = json.load(f)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as e:
            raise ConfigError(f"invalid JSON in config file {path}: {e}") from None
        if not isinstance(values, dict):
            raise ConfigError(f"config file {path} must hold a JSON object")
        logger.info(f"Loaded run configuration from {path}")
        return cls.from_dict(values)

    def merged(self, **overrides) -> "RunConfig":
        """Copy with every override that is not None applied."""
        return dataclasses.replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def validate(self) -> "RunConfig":
        """Raises ConfigError on the first invalid setting."""
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}, expected one of {MODES}")
        if self.mode != "validate" and not self.scene:
            raise ConfigError("a scene file is required")
        if not (math.isfinite(self.step) and self.step > 0.0):
            raise ConfigError(f"step must be > 0, got {self.step}")
        if not (math.isfinite(self.span) and self.span >= self.step):
            raise ConfigError(f"span must be >= step, got span={self.span}, step={self.step}")
        if not 0 <= self.max_reflections <= MAX_REFLECTIONS_CAP:
            raise ConfigError(f"max_reflections must be in [0, {MAX_REFLECTIONS_CAP}], got {self.max_reflections}")
        for name in ("doppler_bin", "time_bin", "delay_bin", "tile_size"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ConfigError(f"{name} must be > 0, got {value}")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.samples < 1:
            raise ConfigError("samples must be >= 1")
        if self.method not in METHODS:
            raise ConfigError(f"unknown extrapolation method {self.method!r}, expected one of {METHODS}")
        if self.log_level.upper() not in LOG_LEVELS:
            raise ConfigError(f"unknown log level {self.log_level!r}")
        self.schedule()
        return self

    def schedule(self) -> TcSchedule:
        return parse_schedule(self.tc, self.span)

    def trace_config(self) -> TraceConfig:
        return TraceConfig(
            max_reflections=self.max_reflections,
            enable_diffraction=self.diffraction,
            enable_scattering=self.scattering,
            combine_interactions=self.combine_interactions,
            tile_size=self.tile_size,
            epsilon=GEOMETRIC_EPSILON,
            threads=self.threads,
        )

    @property
    def out_dir(self) -> Path:
        return Path(self.out)

    def as_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)
