# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Closed-form reflection point kinematics and image sources.

In the face frame the reflecting plane is y = 0 and the reflection point of
a source T and a receiver R is Q = T + (R - T) s with s = y_T / (y_T + y_R),
with Q_y = 0. Velocity and acceleration follow by differentiating that
expression in time. Moving faces are handled by expressing T and R in the
face frame with the relative-motion transforms and mapping Q back.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..constants import DEGENERACY_EPSILON
from ..errors import DegenerateGeometryError, FaceLeftError
from ..geometry.kinematics import KinematicState, LocalFrame, RigidMotion
from ..geometry.series import FrameSeries, StateSeries
from ..geometry.vectors import Vec3

logger = logging.getLogger(__name__)


def _ratio(yt: float, yr: float, eps: float) -> Tuple[float, float]:
    d = yt + yr
    if d <= eps:
        raise DegenerateGeometryError(
            f"terminal on the reflecting plane (y_T + y_R = {d:.3e} m)"
        )
    return yt / d, d


def reflection_point_local(tx: Vec3, rx: Vec3, eps: float = DEGENERACY_EPSILON) -> Vec3:
    """Reflection point on the plane y = 0 of the local frame.

    Raises:
        DegenerateGeometryError: when y_T + y_R <= eps
    """
    tx = np.asarray(tx, dtype=float)
    rx = np.asarray(rx, dtype=float)
    s, _ = _ratio(tx[1], rx[1], eps)
    q = tx + (rx - tx) * s
    q[1] = 0.0
    return q


def reflection_point_velocity(tx: Vec3, rx: Vec3, v_tx: Vec3, v_rx: Vec3, eps: float = DEGENERACY_EPSILON) -> Vec3:
    """Time derivative of reflection_point_local; the y component is 0."""
    tx, rx = np.asarray(tx, dtype=float), np.asarray(rx, dtype=float)
    v_tx, v_rx = np.asarray(v_tx, dtype=float), np.asarray(v_rx, dtype=float)
    s, d = _ratio(tx[1], rx[1], eps)
    s_dot = (v_tx[1] * rx[1] - tx[1] * v_rx[1]) / (d * d)
    v = v_tx + (v_rx - v_tx) * s + (rx - tx) * s_dot
    v[1] = 0.0
    return v


def reflection_point_acceleration(
    tx: Vec3, rx: Vec3, v_tx: Vec3, v_rx: Vec3, a_tx: Vec3, a_rx: Vec3, eps: float = DEGENERACY_EPSILON
) -> Vec3:
    """Second time derivative of reflection_point_local; the y component is 0."""
    tx, rx = np.asarray(tx, dtype=float), np.asarray(rx, dtype=float)
    v_tx, v_rx = np.asarray(v_tx, dtype=float), np.asarray(v_rx, dtype=float)
    a_tx, a_rx = np.asarray(a_tx, dtype=float), np.asarray(a_rx, dtype=float)
    s, d = _ratio(tx[1], rx[1], eps)
    num = v_tx[1] * rx[1] - tx[1] * v_rx[1]
    num_dot = a_tx[1] * rx[1] - tx[1] * a_rx[1]
    d_dot = v_tx[1] + v_rx[1]
    s_dot = num / (d * d)
    s_ddot = num_dot / (d * d) - 2.0 * num * d_dot / (d ** 3)
    a = a_tx + (a_rx - a_tx) * s + 2.0 * (v_rx - v_tx) * s_dot + (rx - tx) * s_ddot
    a[1] = 0.0
    return a


def _reflection_terms(tx, rx, v_tx, v_rx, a_tx, a_rx) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reflection point, velocity and acceleration in the face frame, for (3,) or (T, 3) rows."""
    y_t, y_r = tx[..., 1:2], rx[..., 1:2]
    d = y_t + y_r
    s = y_t / d
    num = v_tx[..., 1:2] * y_r - y_t * v_rx[..., 1:2]
    num_dot = a_tx[..., 1:2] * y_r - y_t * a_rx[..., 1:2]
    d_dot = v_tx[..., 1:2] + v_rx[..., 1:2]
    s_dot = num / (d * d)
    s_ddot = num_dot / (d * d) - 2.0 * num * d_dot / (d ** 3)
    q = tx + (rx - tx) * s
    v = v_tx + (v_rx - v_tx) * s + (rx - tx) * s_dot
    a = a_tx + (a_rx - a_tx) * s + 2.0 * (v_rx - v_tx) * s_dot + (rx - tx) * s_ddot
    for row in (q, v, a):
        row[..., 1] = 0.0
    return q, v, a


def reflection_kinematics_local(tx: KinematicState, rx: KinematicState, eps: float = DEGENERACY_EPSILON) -> KinematicState:
    """Position, velocity and acceleration of the reflection point, all in the local frame."""
    _ratio(tx.position[1], rx.position[1], eps)
    q, v, a = _reflection_terms(tx.position, rx.position, tx.velocity, rx.velocity, tx.acceleration, rx.acceleration)
    return KinematicState(position=q, velocity=v, acceleration=a, reference_time=rx.reference_time)


@dataclass(frozen=True)
class ReflectionKinematics:
    """Reflection point state together with the frame it is expressed in."""

    state: KinematicState
    frame: str = "global"

    @property
    def position(self) -> Vec3:
        return self.state.position

    @property
    def velocity(self) -> Vec3:
        return self.state.velocity

    @property
    def acceleration(self) -> Vec3:
        return self.state.acceleration


@dataclass(frozen=True, eq=False)
class ImageSourceState(KinematicState):
    """Kinematic state of an image source; `depth` counts the mirrorings."""

    depth: int = 1


def reflect_in_frame(frame: LocalFrame, tx: KinematicState, rx: KinematicState, eps: float = DEGENERACY_EPSILON) -> KinematicState:
    """Global reflection point state for the face whose frame is `frame`."""
    q_local = reflection_kinematics_local(frame.state_to_local(tx), frame.state_to_local(rx), eps)
    return frame.state_to_global(q_local)


def reflection_point_kinematics_global(
    face, motion: RigidMotion, tx: KinematicState, rx: KinematicState, t: float, t0: float = 0.0,
    eps: float = DEGENERACY_EPSILON,
) -> ReflectionKinematics:
    """Reflection point on a (possibly moving) face at absolute time t.

    `face` is the face as defined at the reference time t0; tx and rx are
    global states at t.

    Raises:
        DegenerateGeometryError: a terminal lies on the face plane
        FaceLeftError: a terminal is behind the face or Q left the polygon
    """
    dt = t - t0
    frame = face.frame(motion, dt)
    y_t = frame.to_local(tx.position)[1]
    y_r = frame.to_local(rx.position)[1]
    if y_t + y_r > eps and (y_t < 0.0 or y_r < 0.0):
        raise FaceLeftError(f"terminal behind face {face.face_id}")
    state = reflect_in_frame(frame, tx, rx, eps)
    if not face.moved(motion, dt).contains(state.position):
        raise FaceLeftError(f"point left face polygon {face.face_id}")
    return ReflectionKinematics(state.with_time(t))


def image_source_kinematics(source: KinematicState, frame: LocalFrame) -> ImageSourceState:
    """Mirror a source (or an image) across the face of `frame`.

    In the face frame the x and z components of position, velocity and
    acceleration are kept and the y components negated; the result is mapped
    back to the global frame.
    """
    local = frame.state_to_local(source)
    flip = np.array([1.0, -1.0, 1.0])
    mirrored = frame.state_to_global(KinematicState(
        local.position * flip, local.velocity * flip, local.acceleration * flip, local.reference_time,
    ))
    depth = getattr(source, "depth", 0) + 1
    return ImageSourceState(
        mirrored.position, mirrored.velocity, mirrored.acceleration, mirrored.reference_time, depth=depth,
    )


def image_chain(source: KinematicState, frames: Sequence[LocalFrame]) -> List[KinematicState]:
    """[source, image through frames[0], image of that through frames[1], ...]."""
    images = [source]
    for frame in frames:
        images.append(image_source_kinematics(images[-1], frame))
    return images


def backtrack_multibounce(
    frames: Sequence[LocalFrame], source: KinematicState, receiver: KinematicState, eps: float = DEGENERACY_EPSILON
) -> List[KinematicState]:
    """Reflection point states for a chain of faces, source side first.

    The last point is solved from the deepest image and the receiver; each
    earlier point then uses its successor as a new virtual receiver.
    """
    images = image_chain(source, frames[:-1]) if frames else [source]
    points: List[KinematicState] = [None] * len(frames)
    current = receiver
    for i in range(len(frames) - 1, -1, -1):
        current = reflect_in_frame(frames[i], images[i], current, eps).with_time(receiver.reference_time)
        points[i] = current
    return points


# -- timeline rows ------------------------------------------------------------

FLIP = np.array([1.0, -1.0, 1.0])


def reflect_series(frame: FrameSeries, tx: StateSeries, rx: StateSeries,
                   eps: float = DEGENERACY_EPSILON) -> Tuple[StateSeries, np.ndarray]:
    """Rows of reflect_in_frame, with a mask of the steps where it is not degenerate."""
    lt, lr = frame.state_to_local(tx), frame.state_to_local(rx)
    ok = lt.position[:, 1] + lr.position[:, 1] > eps
    with np.errstate(divide="ignore", invalid="ignore"):
        q, v, a = _reflection_terms(
            lt.position, lr.position, lt.velocity, lr.velocity, lt.acceleration, lr.acceleration
        )
    return frame.state_to_global(StateSeries(q, v, a)), ok


def image_series(frame: FrameSeries, source: StateSeries) -> StateSeries:
    """Rows of image_source_kinematics."""
    return frame.state_to_global(frame.state_to_local(source).flipped(FLIP))


def backtrack_series(frames: Sequence[FrameSeries], source: StateSeries, receiver: StateSeries,
                     eps: float = DEGENERACY_EPSILON) -> Tuple[List[StateSeries], np.ndarray]:
    """Rows of backtrack_multibounce and the mask of steps where no denominator vanished."""
    images = [source]
    for frame in frames[:-1]:
        images.append(image_series(frame, images[-1]))
    ok = np.ones(source.count, dtype=bool)
    points: List[StateSeries] = [None] * len(frames)
    current = receiver
    for i in range(len(frames) - 1, -1, -1):
        current, fine = reflect_series(frames[i], images[i], current, eps)
        ok &= fine
        points[i] = current
    return points, ok
