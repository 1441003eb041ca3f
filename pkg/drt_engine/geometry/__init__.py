# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Vector algebra, rigid-body motion and moving reference frames."""

from .kinematics import (
    KinematicState,
    LocalFrame,
    RigidMotion,
    inverse_relative_acceleration,
    inverse_relative_velocity,
    relative_acceleration,
    relative_velocity,
    rigid_point_acceleration,
    rigid_point_velocity,
    taylor_extrapolate,
    to_global,
    to_local,
)
from .vectors import mirror, rotation_matrix, unit, vec3

__all__ = [
    "KinematicState",
    "LocalFrame",
    "RigidMotion",
    "inverse_relative_acceleration",
    "inverse_relative_velocity",
    "mirror",
    "relative_acceleration",
    "relative_velocity",
    "rigid_point_acceleration",
    "rigid_point_velocity",
    "rotation_matrix",
    "taylor_extrapolate",
    "to_global",
    "to_local",
    "unit",
    "vec3",
]
