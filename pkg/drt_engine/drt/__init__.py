# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Closed-form interaction point kinematics and path extrapolation."""

from .diffraction import (
    DiffractionKinematics,
    diffraction_point_acceleration,
    diffraction_point_kinematics,
    diffraction_point_local,
    diffraction_point_velocity,
    shortest_path_point,
)
from .extrapolation import (
    PathTrack,
    TrackedPaths,
    attach_kinematics,
    extrapolate_path,
    extrapolate_paths,
    path_kinematics,
    solve_series,
    track_paths,
)
from .reflection import (
    ImageSourceState,
    ReflectionKinematics,
    backtrack_multibounce,
    image_source_kinematics,
    reflection_point_acceleration,
    reflection_point_kinematics_global,
    reflection_point_local,
    reflection_point_velocity,
)
from .scattering import scatter_point_kinematics

__all__ = [
    "DiffractionKinematics",
    "ImageSourceState",
    "PathTrack",
    "ReflectionKinematics",
    "TrackedPaths",
    "attach_kinematics",
    "backtrack_multibounce",
    "diffraction_point_acceleration",
    "diffraction_point_kinematics",
    "diffraction_point_local",
    "diffraction_point_velocity",
    "extrapolate_path",
    "extrapolate_paths",
    "image_source_kinematics",
    "path_kinematics",
    "reflection_point_acceleration",
    "reflection_point_kinematics_global",
    "reflection_point_local",
    "reflection_point_velocity",
    "scatter_point_kinematics",
    "shortest_path_point",
    "solve_series",
    "track_paths",
]
