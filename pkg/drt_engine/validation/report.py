# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Run the registered oracles and report per-category worst errors."""

import json
import logging
import zlib
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Tuple, Union

import numpy as np

from ..errors import ConfigError, ToleranceExceededError
from .base import OracleResult
from .registry import register_default_oracles

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 1000


def oracle_rng(seed: int, name: str) -> np.random.Generator:
    """Generator of one oracle, independent of which other oracles run."""
    return np.random.default_rng(np.random.SeedSequence([seed, zlib.crc32(name.encode("utf-8"))]))


@dataclass(frozen=True)
class ValidationReport:
    seed: int
    samples: int
    results: Tuple[OracleResult, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> Tuple[OracleResult, ...]:
        return tuple(r for r in self.results if not r.passed)

    def to_text(self) -> str:
        lines = [
            "drt-engine validation report",
            f"seed: {self.seed}",
            f"samples: {self.samples}",
            "",
            f"{'oracle':<26}{'cases':>7}{'skipped':>9}{'max_error':>13}{'tolerance':>11}  status",
        ]
        for r in self.results:
            lines.append(
                f"{r.name:<26}{r.samples:>7}{r.skipped:>9}{r.max_error:>13.3e}{r.tolerance:>11.0e}  "
                f"{'PASS' if r.passed else 'FAIL'}"
            )
        lines.append("")
        for r in self.failures:
            lines.append(f"worst case for {r.name}:")
            lines.append(json.dumps(r.worst_case, sort_keys=True))
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def save(self, path: Union[str, Path]) -> bool:
        """Write the report text.

        Returns:
            True if written successfully, False otherwise
        """
        try:
            path = Path(path)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(self.to_text(), encoding="utf-8")
            logger.info(f"Wrote validation report to {path}")
            return True
        except OSError as e:
            logger.error(f"Error writing validation report {path}: {e}", exc_info=True)
            return False

    def raise_for_failures(self) -> None:
        """Raise ToleranceExceededError naming the worst failing category and its inputs."""
        failures = self.failures
        if not failures:
            return
        worst = max(failures, key=lambda r: r.max_error / r.tolerance)
        raise ToleranceExceededError(
            f"{len(failures)} oracle categor{'y' if len(failures) == 1 else 'ies'} failed; "
            f"worst {worst.name}: {worst.max_error:.3e} > {worst.tolerance:.0e} "
            f"for inputs {json.dumps(worst.worst_case, sort_keys=True)}"
        )


def run_oracles(seed: int = 0, samples: int = DEFAULT_SAMPLES, names: Optional[Iterable[str]] = None) -> ValidationReport:
    """Run registered oracles (all of them by default) with a seeded generator each.

    Raises:
        ConfigError: unknown oracle name or samples < 1
    """
    if samples < 1:
        raise ConfigError("samples must be >= 1")
    registry = register_default_oracles()
    selected = list(registry) if names is None else list(names)
    unknown = [n for n in selected if n not in registry]
    if unknown:
        raise ConfigError(f"unknown oracle(s): {', '.join(unknown)}")
    results = tuple(registry[n].run(oracle_rng(seed, n), samples) for n in selected)
    report = ValidationReport(seed, samples, results)
    logger.info(f"Validation with seed {seed}: {'pass' if report.passed else 'FAIL'}")
    return report
