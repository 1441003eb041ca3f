# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Scattering tiles move rigidly with their object."""

import numpy as np

from ..geometry.kinematics import KinematicState, RigidMotion


def scatter_point_kinematics(tile, motion: RigidMotion, t: float, t0: float = 0.0) -> KinematicState:
    """State at t of the scattering point of `tile`.

    `tile` is a Tile as defined at t0, or directly its t0 centroid.
    """
    anchor = tile.centroid if hasattr(tile, "centroid") else np.asarray(tile, dtype=float)
    return motion.point_state(anchor, t - t0).with_time(t)
