# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Effective Roughness diffuse scattering with a Lambertian pattern.

A tile of area A receives the power density S_i at incidence angle theta_i
and re-radiates the fraction S^2 of the intercepted power as a Lambertian
source at its centroid, so that the density at distance r_s and
observation angle theta_s is

    S^2 * S_i * A * cos(theta_i) * cos(theta_s) / (pi * r_s^2)

The same fraction is removed from specular reflection (see
fresnel.roughness_factor), which keeps the surface energy balance.
"""

import math

import numpy as np

from ..geometry.vectors import Vec3, dots, norms


def _scalar(value):
    return float(value) if np.ndim(value) == 0 else value


def lambertian_density(scattering: float, incident_density, area: float, cos_i, cos_s, r_s):
    if scattering <= 0.0:
        return _scalar(np.zeros(np.shape(cos_s)))
    with np.errstate(divide="ignore", invalid="ignore"):
        density = scattering ** 2 * incident_density * area * cos_i * cos_s / (math.pi * r_s * r_s)
    return _scalar(np.where((np.asarray(cos_i) > 0.0) & (np.asarray(cos_s) > 0.0), density, 0.0))


def er_scatter_field(
    centroid: Vec3,
    normal: Vec3,
    area: float,
    incoming_from: Vec3,
    outgoing_to: Vec3,
    scattering: float,
    incident_density,
):
    """Scattered power density (W/m^2) at `outgoing_to`.

    `incoming_from` is the previous vertex of the ray (the source or its last
    reflection point); `incident_density` the power density arriving at the
    tile along that ray.
    """
    c = np.asarray(centroid, dtype=float)
    d_in = np.asarray(incoming_from, dtype=float) - c
    d_out = np.asarray(outgoing_to, dtype=float) - c
    r_in, r_out = norms(d_in), norms(d_out)
    with np.errstate(divide="ignore", invalid="ignore"):
        cos_i = np.where(r_in > 0.0, dots(d_in, normal) / r_in, 0.0)
        cos_s = np.where(r_out > 0.0, dots(d_out, normal) / r_out, 0.0)
    return lambertian_density(scattering, incident_density, area, cos_i, cos_s, r_out)
