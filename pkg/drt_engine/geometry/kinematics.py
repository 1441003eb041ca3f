# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Point kinematics, rigid-body motion and moving reference frames.

A body moves with a translation of its rotation centre O^I (velocity v_Pi,
constant acceleration a_Pi) and a rotation about a fixed unit axis k through
O^I (angular speed w, constant angular acceleration w_dot). All times passed
to a RigidMotion are offsets `dt` from the scene reference time t0.

The relative-motion helpers take vectors in global components; callers
project them onto a frame's axes with LocalFrame.vector_to_local.
"""

import dataclasses
import math
from dataclasses import dataclass, field
import numpy as np

from .vectors import (
    Vec3,
    ZERO,
    Z_AXIS,
    as_finite_vec3,
    cross,
    is_rotation,
    norm,
    rotation_matrix,
)


class ArrayFieldsEq:
    """Dataclass mixin comparing numpy-array fields element-wise."""

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        for f in dataclasses.fields(self):
            a, b = getattr(self, f.name), getattr(other, f.name)
            if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
                if not np.array_equal(a, b):
                    return False
            elif a != b:
                return False
        return True

    __hash__ = None


def _zero() -> Vec3:
    return ZERO.copy()


@dataclass(frozen=True, eq=False)
class KinematicState(ArrayFieldsEq):
    """Position, velocity and acceleration of a point at `reference_time`."""

    position: Vec3
    velocity: Vec3 = field(default_factory=_zero)
    acceleration: Vec3 = field(default_factory=_zero)
    reference_time: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "position", as_finite_vec3(self.position, "position"))
        object.__setattr__(self, "velocity", as_finite_vec3(self.velocity, "velocity"))
        object.__setattr__(self, "acceleration", as_finite_vec3(self.acceleration, "acceleration"))
        if not math.isfinite(self.reference_time):
            raise ValueError("reference_time must be finite")

    def advanced(self, dt: float) -> "KinematicState":
        """Constant-acceleration state at reference_time + dt."""
        return KinematicState(
            position=taylor_extrapolate(self, dt),
            velocity=self.velocity + self.acceleration * dt,
            acceleration=self.acceleration,
            reference_time=self.reference_time + dt,
        )

    def with_time(self, t: float) -> "KinematicState":
        return dataclasses.replace(self, reference_time=t)


def taylor_extrapolate(state: KinematicState, dt: float) -> Vec3:
    """Second-order Taylor position r + v dt + a dt^2 / 2.

    Exact for constant acceleration. A negative dt extrapolates backward.
    """
    return state.position + state.velocity * dt + 0.5 * state.acceleration * (dt * dt)


@dataclass(frozen=True, eq=False)
class RigidMotion(ArrayFieldsEq):
    """Roto-translation of a rigid body, specified at the scene reference time."""

    translation_velocity: Vec3 = field(default_factory=_zero)
    translation_acceleration: Vec3 = field(default_factory=_zero)
    rotation_center: Vec3 = field(default_factory=_zero)
    rotation_axis: Vec3 = field(default_factory=lambda: Z_AXIS.copy())
    angular_speed: float = 0.0
    angular_acceleration: float = 0.0

    def __post_init__(self):
        for name in ("translation_velocity", "translation_acceleration", "rotation_center", "rotation_axis"):
            object.__setattr__(self, name, as_finite_vec3(getattr(self, name), name))
        object.__setattr__(self, "angular_speed", float(self.angular_speed))
        object.__setattr__(self, "angular_acceleration", float(self.angular_acceleration))
        if not (math.isfinite(self.angular_speed) and math.isfinite(self.angular_acceleration)):
            raise ValueError("angular speed and acceleration must be finite")
        if abs(norm(self.rotation_axis) - 1.0) > 1e-12:
            raise ValueError(f"rotation_axis must be a unit vector, got |k|={norm(self.rotation_axis)!r}")

    @classmethod
    def static(cls) -> "RigidMotion":
        return cls()

    @property
    def is_rotating(self) -> bool:
        return self.angular_speed != 0.0 or self.angular_acceleration != 0.0

    @property
    def is_static(self) -> bool:
        return (
            not self.is_rotating
            and not np.any(self.translation_velocity)
            and not np.any(self.translation_acceleration)
        )

    def angle(self, dt: float) -> float:
        """Rotation angle accumulated since t0: w dt + w_dot dt^2 / 2."""
        return self.angular_speed * dt + 0.5 * self.angular_acceleration * dt * dt

    def angular_velocity(self, dt: float = 0.0) -> Vec3:
        return (self.angular_speed + self.angular_acceleration * dt) * self.rotation_axis

    def angular_acceleration_vector(self) -> Vec3:
        return self.angular_acceleration * self.rotation_axis

    def center(self, dt: float) -> Vec3:
        """Position of the rotation centre O^I at t0 + dt."""
        return (
            self.rotation_center
            + self.translation_velocity * dt
            + 0.5 * self.translation_acceleration * (dt * dt)
        )

    def center_velocity(self, dt: float = 0.0) -> Vec3:
        return self.translation_velocity + self.translation_acceleration * dt

    def rotation(self, dt: float) -> np.ndarray:
        """Orientation change accumulated since t0."""
        if not self.is_rotating:
            return np.eye(3)
        return rotation_matrix(self.rotation_axis, self.angle(dt))

    def transform_point(self, point0: Vec3, dt: float) -> Vec3:
        """Where the body point located at point0 at t0 is at t0 + dt."""
        if self.is_static:
            return np.array(point0, dtype=float)
        return self.center(dt) + self.rotation(dt) @ (np.asarray(point0, dtype=float) - self.rotation_center)

    def transform_vector(self, vector0: Vec3, dt: float) -> Vec3:
        if not self.is_rotating:
            return np.array(vector0, dtype=float)
        return self.rotation(dt) @ np.asarray(vector0, dtype=float)

    def point_state(self, point0: Vec3, dt: float) -> KinematicState:
        """Full kinematic state of a body-fixed point at t0 + dt."""
        p = self.transform_point(point0, dt)
        return KinematicState(
            position=p,
            velocity=rigid_point_velocity(self, p, dt),
            acceleration=rigid_point_acceleration(self, p, dt),
        )


def rigid_point_velocity(motion: RigidMotion, point: Vec3, dt: float = 0.0) -> Vec3:
    """Velocity field of the body, v_Pi + w x (Q - O^I)."""
    r = np.asarray(point, dtype=float) - motion.center(dt)
    return motion.center_velocity(dt) + cross(motion.angular_velocity(dt), r)


def rigid_point_acceleration(motion: RigidMotion, point: Vec3, dt: float = 0.0) -> Vec3:
    """Acceleration field of the body, a_Pi + w_dot x r + w x (w x r)."""
    r = np.asarray(point, dtype=float) - motion.center(dt)
    w = motion.angular_velocity(dt)
    return (
        motion.translation_acceleration
        + cross(motion.angular_acceleration_vector(), r)
        + cross(w, cross(w, r))
    )


def relative_velocity(v0: Vec3, motion: RigidMotion, r_i: Vec3, dt: float = 0.0) -> Vec3:
    """Velocity seen by an observer riding the body: v0 - v_Pi - w x r^I."""
    return v0 - motion.center_velocity(dt) - cross(motion.angular_velocity(dt), r_i)


def relative_acceleration(
    a0: Vec3, motion: RigidMotion, r_i: Vec3, v_i: Vec3, dt: float = 0.0
) -> Vec3:
    """Acceleration seen from the body frame (Euler, Coriolis, centrifugal)."""
    w = motion.angular_velocity(dt)
    return (
        a0
        - motion.translation_acceleration
        - cross(motion.angular_acceleration_vector(), r_i)
        - 2.0 * cross(w, v_i)
        - cross(w, cross(w, r_i))
    )


def inverse_relative_velocity(v_i: Vec3, motion: RigidMotion, r_i: Vec3, dt: float = 0.0) -> Vec3:
    """Inverse of relative_velocity: v^I + v_Pi + w x r^I."""
    return v_i + motion.center_velocity(dt) + cross(motion.angular_velocity(dt), r_i)


def inverse_relative_acceleration(
    a_i: Vec3, motion: RigidMotion, r_i: Vec3, v_i: Vec3, dt: float = 0.0
) -> Vec3:
    """Inverse of relative_acceleration."""
    w = motion.angular_velocity(dt)
    return (
        a_i
        + motion.translation_acceleration
        + cross(motion.angular_acceleration_vector(), r_i)
        + 2.0 * cross(w, v_i)
        + cross(w, cross(w, r_i))
    )


@dataclass(frozen=True, eq=False)
class LocalFrame(ArrayFieldsEq):
    """Reference frame rigidly attached to a moving body, evaluated at t0 + dt.

    `orientation` holds the local axes as columns, so that
    r_global = orientation @ r_local + origin.
    """

    origin: Vec3
    orientation: np.ndarray
    motion: RigidMotion = field(default_factory=RigidMotion.static)
    dt: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "origin", as_finite_vec3(self.origin, "origin"))
        object.__setattr__(self, "orientation", np.asarray(self.orientation, dtype=float))

    @classmethod
    def identity(cls) -> "LocalFrame":
        return cls(origin=ZERO.copy(), orientation=np.eye(3))

    @classmethod
    def attached(cls, origin0: Vec3, orientation0: np.ndarray, motion: RigidMotion, dt: float) -> "LocalFrame":
        """Frame defined at t0 by (origin0, orientation0), carried by motion to t0 + dt."""
        return cls(
            origin=motion.transform_point(origin0, dt),
            orientation=motion.rotation(dt) @ np.asarray(orientation0, dtype=float),
            motion=motion,
            dt=dt,
        )

    @property
    def angle(self) -> float:
        """Rotation accumulated since t0 about the motion axis."""
        return self.motion.angle(self.dt)

    @property
    def is_orthonormal(self) -> bool:
        return is_rotation(self.orientation)

    def to_local(self, point: Vec3) -> Vec3:
        return self.orientation.T @ (np.asarray(point, dtype=float) - self.origin)

    def to_global(self, point: Vec3) -> Vec3:
        return self.orientation @ np.asarray(point, dtype=float) + self.origin

    def vector_to_local(self, vector: Vec3) -> Vec3:
        return self.orientation.T @ np.asarray(vector, dtype=float)

    def vector_to_global(self, vector: Vec3) -> Vec3:
        return self.orientation @ np.asarray(vector, dtype=float)

    def state_to_local(self, state: KinematicState) -> KinematicState:
        """Coordinates, velocity and acceleration as seen by the frame observer."""
        if self.motion.is_static:
            return KinematicState(
                position=self.to_local(state.position),
                velocity=self.vector_to_local(state.velocity),
                acceleration=self.vector_to_local(state.acceleration),
                reference_time=state.reference_time,
            )
        r_c = state.position - self.motion.center(self.dt)
        v_rel = relative_velocity(state.velocity, self.motion, r_c, self.dt)
        a_rel = relative_acceleration(state.acceleration, self.motion, r_c, v_rel, self.dt)
        return KinematicState(
            position=self.to_local(state.position),
            velocity=self.vector_to_local(v_rel),
            acceleration=self.vector_to_local(a_rel),
            reference_time=state.reference_time,
        )

    def state_to_global(self, state: KinematicState) -> KinematicState:
        """Inverse of state_to_local."""
        p = self.to_global(state.position)
        v_rel = self.vector_to_global(state.velocity)
        a_rel = self.vector_to_global(state.acceleration)
        if self.motion.is_static:
            return KinematicState(p, v_rel, a_rel, state.reference_time)
        r_c = p - self.motion.center(self.dt)
        return KinematicState(
            position=p,
            velocity=inverse_relative_velocity(v_rel, self.motion, r_c, self.dt),
            acceleration=inverse_relative_acceleration(a_rel, self.motion, r_c, v_rel, self.dt),
            reference_time=state.reference_time,
        )


def to_local(point: Vec3, frame: LocalFrame) -> Vec3:
    """r^I = R^T (r^0 - r_O)."""
    return frame.to_local(point)


def to_global(point: Vec3, frame: LocalFrame) -> Vec3:
    """r^0 = R r^I + r_O."""
    return frame.to_global(point)


__all__ = [
    "ArrayFieldsEq",
    "KinematicState",
    "LocalFrame",
    "RigidMotion",
    "inverse_relative_acceleration",
    "inverse_relative_velocity",
    "relative_acceleration",
    "relative_velocity",
    "rigid_point_acceleration",
    "rigid_point_velocity",
    "taylor_extrapolate",
    "to_global",
    "to_local",
]
