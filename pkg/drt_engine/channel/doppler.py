# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Doppler shift of a multi-bounce ray from its vertex velocities.

Each segment i, from vertex i-1 to vertex i with unit direction k_i, scales
the frequency by (c - v_i . k_i) / (c - v_{i-1} . k_i). The product is
accumulated in log1p / expm1 form so that shifts of a few hertz on a
gigahertz carrier keep full precision.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..constants import SPEED_OF_LIGHT
from ..errors import InvalidPathError
from ..geometry.series import StateSeries
from ..geometry.vectors import dots, units
from ..rt.paths import RayPath


@dataclass(frozen=True)
class DopplerRay:
    path_id: str
    time: float
    carrier: float
    shift: float

    @property
    def frequency(self) -> float:
        """Apparent frequency f' = f0 + f_D."""
        return self.carrier + self.shift


def _shift(positions: np.ndarray, velocities: np.ndarray, carrier: float):
    """Shift for vertex rows (V, 3) or (V, T, 3); axis 0 runs over the vertices."""
    directions = units(np.diff(positions, axis=0))
    v_from = dots(velocities[:-1], directions)
    v_to = dots(velocities[1:], directions)
    log_ratio = np.sum(np.log1p((v_from - v_to) / (SPEED_OF_LIGHT - v_from)), axis=0)
    return carrier * np.expm1(log_ratio)


def doppler_shift(path: RayPath, carrier: float) -> DopplerRay:
    """Doppler shift of a path whose vertices carry velocities.

    Raises:
        InvalidPathError: the path has no vertex kinematics
    """
    if not path.kinematics:
        raise InvalidPathError(f"path {path.path_id} has no vertex kinematics")
    velocities = np.array([v.velocity for v in path.vertices])
    return DopplerRay(path.path_id, path.time, carrier, float(_shift(path.points, velocities, carrier)))


def doppler_series(states: Sequence[StateSeries], carrier: float) -> np.ndarray:
    """Doppler shift (T,) of a path given its vertex states over a timeline, TX first."""
    positions = np.stack([s.position for s in states])
    velocities = np.stack([s.velocity for s in states])
    return _shift(positions, velocities, carrier)


def phase_doppler(length_before: float, length_after: float, h: float, carrier: float) -> float:
    """-(f0 / c) dL/dt from path lengths at t - h and t + h."""
    return -carrier / SPEED_OF_LIGHT * (length_after - length_before) / (2.0 * h)
