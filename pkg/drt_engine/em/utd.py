# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Uniform wedge diffraction coefficients.

Kouyoumjian-Pathak coefficients for a straight wedge with exterior angle
n*pi, with Luebbers' heuristic for finite conductivity: the two terms that
belong to the reflection boundaries of the 0-face and the n-face are
weighted by the Fresnel coefficients of those faces.

Every angle argument may be an array over time steps.
"""

import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np
import scipy.special

from ..geometry.vectors import Vec3, dots, units
from .fresnel import outer

logger = logging.getLogger(__name__)

# Distance from a cotangent pole below which its limit form is used.
POLE_TOLERANCE = 1e-10

Gammas = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]


def _scalar(value):
    return value[()] if isinstance(value, np.ndarray) and value.ndim == 0 else value


def transition_function(x):
    """Kouyoumjian transition function F(x), via the modified negative Fresnel integral.

    F(x) = 2j sqrt(x) e^{jx} int_{sqrt(x)}^inf e^{-j t^2} dt for x >= 0.
    """
    x = np.asarray(x, dtype=float)
    sqrt_x = np.sqrt(x)
    fm = scipy.special.modfresnelm(sqrt_x)[0]
    return 2j * sqrt_x * np.exp(1j * x) * fm


def _term(k: float, n: float, length, beta, sign: int):
    """cot((pi + sign beta) / 2n) F(k L a(beta)), with its limit near the pole."""
    beta = np.asarray(beta, dtype=float)
    length = np.asarray(length, dtype=float)
    big_n = np.round((beta + sign * math.pi) / (2.0 * math.pi * n))
    eps = math.pi + sign * beta - 2.0 * math.pi * n * big_n
    q = np.exp(1j * math.pi / 4.0)
    sgn = np.where(eps > 0.0, 1.0, -1.0)
    limit = n * q * (np.sqrt(2.0 * math.pi * k * length) * sgn - 2.0 * k * length * eps * q)
    a = 2.0 * np.cos((2.0 * n * math.pi * big_n - beta) / 2.0) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        regular = transition_function(k * length * a) / np.tan((math.pi + sign * beta) / (2.0 * n))
    return np.where(np.abs(eps) < POLE_TOLERANCE, limit, regular)


def utd_coefficient(k: float, n: float, beta0, phi, phi_p, length, r0=1.0, rn=1.0):
    """Scalar wedge diffraction coefficient.

    Args:
        k: wavenumber (1/m)
        n: exterior wedge factor, exterior angle = n pi
        beta0: angle between the incident ray and the edge
        phi, phi_p: diffraction and incidence angles measured from the 0-face
        length: distance parameter L (m)
        r0, rn: reflection coefficients weighting the 0-face and n-face terms
    """
    pre = -np.exp(-1j * math.pi / 4.0) / (2.0 * n * math.sqrt(2.0 * math.pi * k) * np.sin(beta0))
    beta_m = np.subtract(phi, phi_p)
    beta_p = np.add(phi, phi_p)
    value = pre * (
        _term(k, n, length, beta_m, +1)
        + _term(k, n, length, beta_m, -1)
        + np.asarray(r0) * _term(k, n, length, beta_p, -1)
        + np.asarray(rn) * _term(k, n, length, beta_p, +1)
    )
    return _scalar(value)


def wedge_coefficients(
    k: float, n: float, beta0, phi, phi_p, length,
    face_gammas: Optional[Gammas] = None,
    n_face_gammas: Optional[Gammas] = None,
):
    """(D_soft, D_hard) with Luebbers weighting.

    `face_gammas(theta)` returns (Gamma_TE, Gamma_TM) of a face at incidence
    angle theta; None means a perfect conductor. The 0-face is seen at
    grazing angle phi_p and the n-face at n pi - phi.
    """
    def gammas(fn, grazing):
        if fn is None:
            return -1.0 + 0.0j, 1.0 + 0.0j
        return fn(np.abs(math.pi / 2.0 - np.asarray(grazing, dtype=float)))

    te0, tm0 = gammas(face_gammas, phi_p)
    ten, tmn = gammas(n_face_gammas if n_face_gammas is not None else face_gammas, n * math.pi - np.asarray(phi))
    d_soft = utd_coefficient(k, n, beta0, phi, phi_p, length, te0, ten)
    d_hard = utd_coefficient(k, n, beta0, phi, phi_p, length, tm0, tmn)
    return d_soft, d_hard


def distance_parameter(s_in, s_out, beta0):
    """L for spherical-wave incidence."""
    return _scalar(np.asarray(s_in * s_out * np.sin(beta0) ** 2 / (s_in + s_out)))


def diffraction_dyadic(k_in: Vec3, k_out: Vec3, edge_direction: Vec3, d_soft, d_hard) -> np.ndarray:
    """3x3 complex matrix -D_s b0 b0' - D_h phi phi' in edge-fixed ray bases, row-wise over a stack."""
    e = edge_direction
    phi_in = -units(np.cross(e, k_in))
    phi_out = units(np.cross(e, k_out))
    beta_in = np.cross(k_in, phi_in)
    beta_out = np.cross(k_out, phi_out)
    d_soft = np.asarray(d_soft)[..., None, None]
    d_hard = np.asarray(d_hard)[..., None, None]
    return -d_soft * outer(beta_out, beta_in) - d_hard * outer(phi_out, phi_in)


def wedge_azimuth(origin: np.ndarray, axes: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Azimuth around an edge frame (x on the 0-face, y its normal), in [0, 2 pi)."""
    d = points - origin
    phi = np.arctan2(dots(d, axes[..., 1]), dots(d, axes[..., 0]))
    return np.where(phi < 0.0, phi + 2.0 * math.pi, phi)


def edge_angles(edge, incoming_from: Vec3, point: Vec3, outgoing_to: Vec3) -> Tuple[float, float, float]:
    """(beta0, phi_p, phi) of a diffraction at `point` on a posed edge."""
    return edge_angles_at(edge.start, edge.axes, incoming_from, point, outgoing_to)


def edge_angles_at(origin: np.ndarray, axes: np.ndarray, incoming_from, point, outgoing_to):
    """edge_angles for an edge given by its frame origin and axes (columns tangent, normal, direction).

    With (T, 3) points and (T, 3, 3) axes every result is a (T,) array.
    """
    k_in = units(np.asarray(point, dtype=float) - incoming_from)
    beta0 = np.arccos(np.clip(dots(k_in, axes[..., 2]), -1.0, 1.0))
    phi_p = wedge_azimuth(origin, axes, np.asarray(incoming_from, dtype=float))
    phi = wedge_azimuth(origin, axes, np.asarray(outgoing_to, dtype=float))
    if np.ndim(beta0) == 0:
        return float(beta0), float(phi_p), float(phi)
    return beta0, phi_p, phi
