# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Base class for numerical oracles."""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from ..errors import GeometryError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleResult:
    """Outcome of one oracle category."""

    name: str
    samples: int
    skipped: int
    max_error: float
    tolerance: float
    worst_case: Dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.samples > self.skipped and self.max_error <= self.tolerance


class BaseOracle(ABC):
    """Abstract base class for all oracles.

    An oracle draws random cases from a generator and compares an analytic
    result with an independent reference (a finite difference, an inverse
    transform or a fresh trace). `evaluate` returns the relative error of one
    case; cases whose geometry degenerates are skipped.
    """

    # Upper bound on cases per run for oracles that trace whole scenes.
    sample_limit: Optional[int] = None

    @property
    @abstractmethod
    def name(self) -> str:
        """Return the oracle name."""
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        """Return the oracle description."""
        pass

    @property
    @abstractmethod
    def tolerance(self) -> float:
        """Return the largest acceptable relative error."""
        pass

    @abstractmethod
    def sample(self, rng: np.random.Generator) -> Dict[str, Any]:
        """Draw one case as plain JSON-compatible values."""
        pass

    @abstractmethod
    def evaluate(self, case: Dict[str, Any]) -> float:
        """Relative error of one case.

        Raises:
            GeometryError: the case is degenerate and must be skipped
        """
        pass

    def run(self, rng: np.random.Generator, samples: int) -> OracleResult:
        count = samples if self.sample_limit is None else min(samples, self.sample_limit)
        worst = -1.0
        worst_case: Dict[str, Any] = {}
        skipped = 0
        for _ in range(count):
            case = self.sample(rng)
            try:
                err = float(self.evaluate(case))
            except GeometryError as e:
                logger.debug(f"{self.name}: skipped degenerate case: {e}")
                skipped += 1
                continue
            if math.isnan(err):
                err = math.inf
            if err > worst:
                worst, worst_case = err, case
        max_error = max(worst, 0.0)
        result = OracleResult(self.name, count, skipped, max_error, self.tolerance, worst_case)
        logger.info(
            f"Oracle {self.name}: max error {max_error:.3e} (tol {self.tolerance:.0e}), "
            f"{'pass' if result.passed else 'FAIL'}"
        )
        return result
