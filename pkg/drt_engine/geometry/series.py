# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Kinematic states, rigid motions and moving frames sampled on a time grid.

These are the batched counterparts of KinematicState, RigidMotion and
LocalFrame: every array carries a leading time axis of length T, so one
numpy expression evaluates a quantity at every step of a DRT segment.
Row k of any result equals the scalar computation at times[k].
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .kinematics import KinematicState, LocalFrame, RigidMotion
from .vectors import Vec3, apply, apply_transposed, rotation_matrices


@dataclass(frozen=True, eq=False)
class StateSeries:
    """Position, velocity and acceleration rows, each of shape (T, 3)."""

    position: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray

    @property
    def count(self) -> int:
        return len(self.position)

    @classmethod
    def from_state(cls, state: KinematicState, dt: np.ndarray) -> "StateSeries":
        """Constant-acceleration samples of state at reference_time + dt."""
        dt = np.asarray(dt, dtype=float)[:, None]
        return cls(
            position=state.position + state.velocity * dt + 0.5 * state.acceleration * (dt * dt),
            velocity=state.velocity + state.acceleration * dt,
            acceleration=np.broadcast_to(state.acceleration, (len(dt), 3)),
        )

    @classmethod
    def still(cls, position: np.ndarray) -> "StateSeries":
        zero = np.zeros_like(position)
        return cls(position, zero, zero)

    def at(self, k: int, t: float) -> KinematicState:
        return KinematicState(self.position[k], self.velocity[k], self.acceleration[k], reference_time=t)

    def flipped(self, flip: np.ndarray) -> "StateSeries":
        return StateSeries(self.position * flip, self.velocity * flip, self.acceleration * flip)


class MotionSeries:
    """A RigidMotion evaluated at offsets dt (T,) from the scene reference time."""

    def __init__(self, motion: RigidMotion, dt: np.ndarray):
        self.motion = motion
        self.dt = np.asarray(dt, dtype=float)
        count = len(self.dt)
        col = self.dt[:, None]
        self.is_static = motion.is_static
        self.is_rotating = motion.is_rotating
        self.center = (
            motion.rotation_center
            + motion.translation_velocity * col
            + 0.5 * motion.translation_acceleration * (col * col)
        )
        self.center_velocity = motion.translation_velocity + motion.translation_acceleration * col
        self.omega = (motion.angular_speed + motion.angular_acceleration * col) * motion.rotation_axis
        self.alpha = motion.angular_acceleration_vector()
        if self.is_rotating:
            angles = motion.angular_speed * self.dt + 0.5 * motion.angular_acceleration * self.dt * self.dt
            self.rotation = rotation_matrices(motion.rotation_axis, angles)
        else:
            self.rotation = np.broadcast_to(np.eye(3), (count, 3, 3))

    def transform_points(self, point0: np.ndarray) -> np.ndarray:
        """Rows of the body point that sat at point0 (3,) at t0."""
        if self.is_static:
            return np.broadcast_to(np.asarray(point0, dtype=float), (len(self.dt), 3))
        return self.center + apply(self.rotation, np.asarray(point0, dtype=float) - self.motion.rotation_center)

    def to_body(self, points: np.ndarray) -> np.ndarray:
        """Inverse of transform_points: t0 coordinates of the body points at `points` (T, 3)."""
        if self.is_static:
            return points
        return self.motion.rotation_center + apply_transposed(self.rotation, points - self.center)

    def point_state(self, point0: Vec3) -> StateSeries:
        """Series of the full state of a body-fixed point."""
        p = self.transform_points(point0)
        r = p - self.center
        w = self.omega
        return StateSeries(
            position=p,
            velocity=self.center_velocity + np.cross(w, r),
            acceleration=(
                self.motion.translation_acceleration + np.cross(self.alpha, r) + np.cross(w, np.cross(w, r))
            ),
        )


class FrameSeries:
    """A LocalFrame attached to a moving body, one row per time step."""

    def __init__(self, origin: np.ndarray, orientation: np.ndarray, motion: Optional[MotionSeries] = None):
        self.origin = origin
        self.orientation = orientation
        self.motion = motion

    @classmethod
    def attached(cls, origin0: Vec3, orientation0: np.ndarray, motion: MotionSeries) -> "FrameSeries":
        return cls(
            origin=motion.transform_points(origin0),
            orientation=np.matmul(motion.rotation, np.asarray(orientation0, dtype=float)),
            motion=motion,
        )

    def axis(self, i: int) -> np.ndarray:
        """Rows of the i-th local axis in global components."""
        return self.orientation[:, :, i]

    def at(self, k: int) -> LocalFrame:
        motion = self.motion.motion if self.motion is not None else RigidMotion.static()
        dt = float(self.motion.dt[k]) if self.motion is not None else 0.0
        return LocalFrame(self.origin[k], self.orientation[k], motion, dt)

    def to_local(self, points: np.ndarray) -> np.ndarray:
        return apply_transposed(self.orientation, points - self.origin)

    def to_global(self, points: np.ndarray) -> np.ndarray:
        return apply(self.orientation, points) + self.origin

    def vector_to_local(self, vectors: np.ndarray) -> np.ndarray:
        return apply_transposed(self.orientation, vectors)

    def vector_to_global(self, vectors: np.ndarray) -> np.ndarray:
        return apply(self.orientation, vectors)

    @property
    def is_static(self) -> bool:
        return self.motion is None or self.motion.is_static

    def state_to_local(self, state: StateSeries) -> StateSeries:
        """Rows of LocalFrame.state_to_local, Coriolis and centripetal terms included."""
        position = self.to_local(state.position)
        if self.is_static:
            return StateSeries(position, self.vector_to_local(state.velocity), self.vector_to_local(state.acceleration))
        m = self.motion
        if not m.is_rotating:
            v_rel = state.velocity - m.center_velocity
            a_rel = state.acceleration - m.motion.translation_acceleration
            return StateSeries(position, self.vector_to_local(v_rel), self.vector_to_local(a_rel))
        r_c = state.position - m.center
        w = m.omega
        v_rel = state.velocity - m.center_velocity - np.cross(w, r_c)
        a_rel = (
            state.acceleration
            - m.motion.translation_acceleration
            - np.cross(m.alpha, r_c)
            - 2.0 * np.cross(w, v_rel)
            - np.cross(w, np.cross(w, r_c))
        )
        return StateSeries(position, self.vector_to_local(v_rel), self.vector_to_local(a_rel))

    def state_to_global(self, state: StateSeries) -> StateSeries:
        """Inverse of state_to_local."""
        p = self.to_global(state.position)
        v_rel = self.vector_to_global(state.velocity)
        a_rel = self.vector_to_global(state.acceleration)
        if self.is_static:
            return StateSeries(p, v_rel, a_rel)
        m = self.motion
        if not m.is_rotating:
            return StateSeries(p, v_rel + m.center_velocity, a_rel + m.motion.translation_acceleration)
        r_c = p - m.center
        w = m.omega
        return StateSeries(
            position=p,
            velocity=v_rel + m.center_velocity + np.cross(w, r_c),
            acceleration=(
                a_rel
                + m.motion.translation_acceleration
                + np.cross(m.alpha, r_c)
                + 2.0 * np.cross(w, v_rel)
                + np.cross(w, np.cross(w, r_c))
            ),
        )


__all__ = ["FrameSeries", "MotionSeries", "StateSeries"]
