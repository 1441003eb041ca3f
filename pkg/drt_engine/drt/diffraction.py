# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Closed-form diffraction point kinematics on a straight edge.

The edge frame has z along the edge, so the diffraction point is Q = (0, 0, z)
with z the point where the Keller cone condition holds: the distances d_T and
d_R of the endpoints from the edge axis split the z gap in proportion.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from ..constants import DEGENERACY_EPSILON
from ..errors import DegenerateGeometryError, FaceLeftError
from ..geometry.kinematics import KinematicState, LocalFrame, RigidMotion
from ..geometry.series import FrameSeries, StateSeries
from ..geometry.vectors import Vec3

logger = logging.getLogger(__name__)


def _check(d_t: float, d_r: float, eps: float) -> None:
    if d_t < eps or d_r < eps:
        raise DegenerateGeometryError(f"terminal on the edge axis (d_T={d_t:.3e}, d_R={d_r:.3e})")


def _radial_rows(p: np.ndarray, v: np.ndarray, a: np.ndarray):
    """Distance from the z axis and its first two time derivatives."""
    d = np.hypot(p[..., 0], p[..., 1])
    d_dot = (p[..., 0] * v[..., 0] + p[..., 1] * v[..., 1]) / d
    d_ddot = (v[..., 0] ** 2 + v[..., 1] ** 2 + p[..., 0] * a[..., 0] + p[..., 1] * a[..., 1]) / d - d_dot * d_dot / d
    return d, d_dot, d_ddot


def diffraction_point_local(tx: Vec3, rx: Vec3, eps: float = DEGENERACY_EPSILON) -> Vec3:
    """Diffraction point (0, 0, z) in the edge frame.

    Raises:
        DegenerateGeometryError: TX or RX on the edge line
    """
    tx, rx = np.asarray(tx, dtype=float), np.asarray(rx, dtype=float)
    d_t = float(np.hypot(tx[0], tx[1]))
    d_r = float(np.hypot(rx[0], rx[1]))
    _check(d_t, d_r, eps)
    w = d_r / (d_t + d_r)
    return np.array([0.0, 0.0, rx[2] + w * (tx[2] - rx[2])])


def diffraction_point_velocity(tx: Vec3, rx: Vec3, v_tx: Vec3, v_rx: Vec3, eps: float = DEGENERACY_EPSILON) -> Vec3:
    zero = np.zeros(3)
    return diffraction_point_acceleration(tx, rx, v_tx, v_rx, zero, zero, eps, velocity_only=True)


def diffraction_point_acceleration(
    tx: Vec3, rx: Vec3, v_tx: Vec3, v_rx: Vec3, a_tx: Vec3, a_rx: Vec3,
    eps: float = DEGENERACY_EPSILON, velocity_only: bool = False,
) -> Vec3:
    """Second time derivative of the diffraction point (first with velocity_only)."""
    tx, rx = np.asarray(tx, dtype=float), np.asarray(rx, dtype=float)
    v_tx, v_rx = np.asarray(v_tx, dtype=float), np.asarray(v_rx, dtype=float)
    a_tx, a_rx = np.asarray(a_tx, dtype=float), np.asarray(a_rx, dtype=float)
    _check(float(np.hypot(tx[0], tx[1])), float(np.hypot(rx[0], rx[1])), eps)
    d_t, dd_t, ddd_t = _radial_rows(tx, v_tx, a_tx)
    d_r, dd_r, ddd_r = _radial_rows(rx, v_rx, a_rx)
    s = d_t + d_r
    s_dot = dd_t + dd_r
    w = d_r / s
    m = dd_r * d_t - d_r * dd_t
    w_dot = m / (s * s)
    dz = tx[2] - rx[2]
    dz_dot = v_tx[2] - v_rx[2]
    if velocity_only:
        return np.array([0.0, 0.0, v_rx[2] + w_dot * dz + w * dz_dot])
    m_dot = ddd_r * d_t - d_r * ddd_t
    w_ddot = m_dot / (s * s) - 2.0 * m * s_dot / (s ** 3)
    dz_ddot = a_tx[2] - a_rx[2]
    return np.array([0.0, 0.0, a_rx[2] + w_ddot * dz + 2.0 * w_dot * dz_dot + w * dz_ddot])


def _diffraction_terms(tx, rx, v_tx, v_rx, a_tx, a_rx) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Diffraction point, velocity and acceleration in the edge frame, for (3,) or (T, 3) rows."""
    d_t, dd_t, ddd_t = _radial_rows(tx, v_tx, a_tx)
    d_r, dd_r, ddd_r = _radial_rows(rx, v_rx, a_rx)
    s = d_t + d_r
    w = d_r / s
    m = dd_r * d_t - d_r * dd_t
    w_dot = m / (s * s)
    w_ddot = (ddd_r * d_t - d_r * ddd_t) / (s * s) - 2.0 * m * (dd_t + dd_r) / (s ** 3)
    dz = tx[..., 2] - rx[..., 2]
    dz_dot = v_tx[..., 2] - v_rx[..., 2]
    dz_ddot = a_tx[..., 2] - a_rx[..., 2]
    zeros = np.zeros_like(dz)
    q = np.stack((zeros, zeros, rx[..., 2] + w * dz), axis=-1)
    v = np.stack((zeros, zeros, v_rx[..., 2] + w_dot * dz + w * dz_dot), axis=-1)
    a = np.stack((zeros, zeros, a_rx[..., 2] + w_ddot * dz + 2.0 * w_dot * dz_dot + w * dz_ddot), axis=-1)
    return q, v, a


def diffraction_kinematics_local(tx: KinematicState, rx: KinematicState, eps: float = DEGENERACY_EPSILON) -> KinematicState:
    _check(float(np.hypot(*tx.position[:2])), float(np.hypot(*rx.position[:2])), eps)
    q, v, a = _diffraction_terms(tx.position, rx.position, tx.velocity, rx.velocity, tx.acceleration, rx.acceleration)
    return KinematicState(position=q, velocity=v, acceleration=a, reference_time=rx.reference_time)


@dataclass(frozen=True)
class DiffractionKinematics:
    """Diffraction point state plus its parameter along the edge (metres from the start)."""

    state: KinematicState
    parameter: float

    @property
    def position(self) -> Vec3:
        return self.state.position

    @property
    def velocity(self) -> Vec3:
        return self.state.velocity

    @property
    def acceleration(self) -> Vec3:
        return self.state.acceleration


def diffract_in_frame(frame: LocalFrame, tx: KinematicState, rx: KinematicState, eps: float = DEGENERACY_EPSILON) -> Tuple[KinematicState, float]:
    """Global diffraction point state and its local z for the edge of `frame`."""
    q_local = diffraction_kinematics_local(frame.state_to_local(tx), frame.state_to_local(rx), eps)
    return frame.state_to_global(q_local), float(q_local.position[2])


def diffraction_point_kinematics(
    edge, motion: RigidMotion, tx: KinematicState, rx: KinematicState, t: float, t0: float = 0.0,
    eps: float = DEGENERACY_EPSILON,
) -> DiffractionKinematics:
    """Diffraction point on a (possibly moving) edge at absolute time t.

    `edge` is the edge at the reference time t0.

    Raises:
        DegenerateGeometryError: TX or RX on the edge line
        FaceLeftError: the point is outside the edge segment
    """
    frame = edge.frame(motion, t - t0)
    state, z = diffract_in_frame(frame, tx, rx, eps)
    tol = max(eps, 1e-9 * edge.length)
    if z < -tol or z > edge.length + tol:
        raise FaceLeftError(f"point left edge segment {edge.edge_id}")
    return DiffractionKinematics(state.with_time(t), z)


def shortest_path_point(tx: Vec3, rx: Vec3, z_min: float, z_max: float, xtol: float = 1e-12) -> float:
    """Edge-frame z minimizing |TQ| + |QR| by bounded scalar search.

    Independent of the closed form in diffraction_point_local; the two agree
    whenever the Keller point lies inside [z_min, z_max].
    """
    tx, rx = np.asarray(tx, dtype=float), np.asarray(rx, dtype=float)

    def length(z: float) -> float:
        q = np.array([0.0, 0.0, z])
        return float(np.linalg.norm(tx - q) + np.linalg.norm(rx - q))

    result = minimize_scalar(length, bounds=(z_min, z_max), method="bounded", options={"xatol": xtol})
    return float(result.x)


def diffract_series(frame: FrameSeries, tx: StateSeries, rx: StateSeries,
                    eps: float = DEGENERACY_EPSILON) -> Tuple[StateSeries, np.ndarray, np.ndarray]:
    """Rows of diffract_in_frame: global state, local z and the mask of non-degenerate steps."""
    lt, lr = frame.state_to_local(tx), frame.state_to_local(rx)
    ok = (np.hypot(lt.position[:, 0], lt.position[:, 1]) >= eps) & (np.hypot(lr.position[:, 0], lr.position[:, 1]) >= eps)
    with np.errstate(divide="ignore", invalid="ignore"):
        q, v, a = _diffraction_terms(
            lt.position, lr.position, lt.velocity, lr.velocity, lt.acceleration, lr.acceleration
        )
    return frame.state_to_global(StateSeries(q, v, a)), q[:, 2], ok
