# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Physical constants, unit conversions and numerical tolerances."""

import math

from scipy import constants as _sc

SPEED_OF_LIGHT = _sc.c
VACUUM_PERMITTIVITY = _sc.epsilon_0
FREE_SPACE_IMPEDANCE = math.sqrt(_sc.mu_0 / _sc.epsilon_0)

KMH = 1000.0 / 3600.0
DEG = math.pi / 180.0

# Absolute tolerance for "on polygon" / "on edge" tests, in metres.
GEOMETRIC_EPSILON = 1e-9

# Vanishing-denominator threshold for the closed-form interaction points.
DEGENERACY_EPSILON = 1e-9

# Half-wave dipole maximum gain (linear).
DIPOLE_GAIN = 1.643

MAX_REFLECTIONS_CAP = 4
