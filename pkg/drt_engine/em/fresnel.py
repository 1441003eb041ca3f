# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Fresnel reflection from a homogeneous lossy half-space.

Sign convention: the TE (perpendicular) coefficient multiplies the field
component normal to the plane of incidence; the TM (parallel) coefficient
multiplies the in-plane component expressed in ray-fixed bases
e_par = e_perp x k on both sides. With this convention a perfect conductor
gives TE = -1 and TM = +1.

Angles and directions may be single values or stacks of them with a leading
time axis; scalar inputs give Python scalars back.
"""

import math
from typing import Tuple

import numpy as np

from ..constants import VACUUM_PERMITTIVITY
from ..geometry.vectors import Vec3, dots, norms, perpendiculars, units


def complex_permittivity(permittivity: float, conductivity: float, frequency: float) -> complex:
    """eps_r - j sigma / (2 pi f eps0)."""
    return complex(permittivity, -conductivity / (2.0 * math.pi * frequency * VACUUM_PERMITTIVITY))


def fresnel_coefficients(theta_i, material, frequency: float) -> Tuple[complex, complex]:
    """(Gamma_TE, Gamma_TM) at incidence angle theta_i from the normal.

    `material` needs permittivity, conductivity and perfect_conductor.
    """
    theta = np.asarray(theta_i, dtype=float)
    if getattr(material, "perfect_conductor", False):
        gamma_te = np.full(theta.shape, -1.0 + 0.0j)
        gamma_tm = np.full(theta.shape, 1.0 + 0.0j)
    else:
        eps_c = complex_permittivity(material.permittivity, material.conductivity, frequency)
        cos_t = np.cos(theta)
        root = np.sqrt(eps_c - np.sin(theta) ** 2)
        gamma_te = (cos_t - root) / (cos_t + root)
        gamma_tm = (eps_c * cos_t - root) / (eps_c * cos_t + root)
    if theta.ndim == 0:
        return complex(gamma_te), complex(gamma_tm)
    return gamma_te, gamma_tm


def roughness_factor(scattering: float) -> float:
    """Specular attenuation sqrt(1 - S^2) of a surface that scatters a fraction S^2 of the power."""
    return math.sqrt(max(0.0, 1.0 - scattering * scattering))


def incidence_angle(k_in: Vec3, normal: Vec3):
    """Angle between the incoming ray direction and the surface normal, in [0, pi/2]."""
    angle = np.arccos(np.minimum(1.0, np.abs(dots(k_in, normal))))
    return float(angle) if np.ndim(angle) == 0 else angle


def outer(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise outer products a b' of (..., 3) stacks."""
    return a[..., :, None] * b[..., None, :]


def reflection_dyadic(k_in: Vec3, k_out: Vec3, normal: Vec3, gamma_te, gamma_tm) -> np.ndarray:
    """3x3 complex matrix (or a stack of them) mapping the incident field to the reflected field."""
    perp = np.cross(k_in, normal)
    grazing = norms(perp) > 1e-12
    perp = np.where(grazing[..., None], units(perp), perpendiculars(np.asarray(normal, dtype=float)))
    par_in = np.cross(perp, k_in)
    par_out = np.cross(perp, k_out)
    te = np.asarray(gamma_te)[..., None, None]
    tm = np.asarray(gamma_tm)[..., None, None]
    return te * outer(perp, perp) + tm * outer(par_out, par_in)


def unpolarized_power_factor(gamma_te, gamma_tm):
    return 0.5 * (np.abs(gamma_te) ** 2 + np.abs(gamma_tm) ** 2)
