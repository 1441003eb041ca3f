# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Isotropic and half-wave dipole antennas.

An antenna is described towards a ray direction k by its complex
polarization vector p, transverse to k, with |p|^2 equal to the gain.
Isotropic antennas are unpolarized: a transmitter splits its power evenly
over two orthogonal transverse polarizations and a receiver collects every
transverse component.

Directions and fields may be stacked along a leading time axis.
"""

import math
from typing import List, Tuple

import numpy as np

from ..constants import DIPOLE_GAIN
from ..geometry.vectors import Vec3, dots, norms, perpendiculars, units


def _scalar(value):
    return float(value) if np.ndim(value) == 0 else value


def dipole_pattern(axis: Vec3, k: Vec3):
    """Normalized half-wave dipole field pattern cos(pi/2 cos t) / sin t."""
    cos_t = np.clip(dots(axis, k), -1.0, 1.0)
    sin_t = np.sqrt(np.maximum(0.0, 1.0 - cos_t * cos_t))
    with np.errstate(divide="ignore", invalid="ignore"):
        pattern = np.where(sin_t < 1e-12, 0.0, np.cos(0.5 * math.pi * cos_t) / sin_t)
    return _scalar(pattern)


def dipole_vector(axis: Vec3, k: Vec3) -> Vec3:
    """Polarization vector of a dipole along `axis` seen in direction k."""
    k = np.asarray(k, dtype=float)
    transverse = axis - dots(axis, k)[..., None] * k
    scale = math.sqrt(DIPOLE_GAIN) * np.asarray(dipole_pattern(axis, k))
    vector = scale[..., None] * units(transverse)
    return np.where((norms(transverse) < 1e-12)[..., None], 0.0, vector)


def gain(antenna, k: Vec3):
    if antenna.kind == "dipole":
        return _scalar(DIPOLE_GAIN * np.asarray(dipole_pattern(antenna.axis, k)) ** 2)
    if np.ndim(k) > 1:
        return np.ones(np.shape(k)[:-1])
    return 1.0


def tx_polarizations(antenna, k: Vec3) -> List[Tuple[float, Vec3]]:
    """(power weight, polarization vector) pairs radiated along k."""
    if antenna.kind == "dipole":
        return [(1.0, dipole_vector(antenna.axis, k))]
    k = np.asarray(k, dtype=float)
    u = perpendiculars(k)
    return [(0.5, u), (0.5, np.cross(u, k))]


def rx_power_factor(antenna, k_arrival: Vec3, field: np.ndarray):
    """|p . E|^2 for a dipole, |E|^2 for an isotropic receiver."""
    if antenna.kind == "dipole":
        p = dipole_vector(antenna.axis, k_arrival)
        return _scalar(np.abs(np.sum(p * field, axis=-1)) ** 2)
    return _scalar(np.sum(np.abs(field) ** 2, axis=-1))


def rx_coupling(antenna, k_arrival: Vec3, field: np.ndarray):
    """Complex received voltage factor; for isotropic receivers the largest field component."""
    if antenna.kind == "dipole":
        value = np.sum(dipole_vector(antenna.axis, k_arrival) * field, axis=-1)
    else:
        largest = np.argmax(np.abs(field), axis=-1)[..., None]
        value = np.take_along_axis(field, largest, axis=-1)[..., 0]
    return complex(value) if np.ndim(value) == 0 else value


def unpolarized_fraction(antenna) -> float:
    """Share of an unpolarized wave's power picked up by the antenna."""
    return 0.5 if antenna.kind == "dipole" else 1.0
