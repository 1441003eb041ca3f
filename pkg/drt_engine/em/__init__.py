# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Per-ray field computation: Fresnel, UTD, Effective Roughness and antennas."""

from .field import FieldSeries, RayField, field_series, free_space_power, path_field
from .fresnel import fresnel_coefficients, reflection_dyadic, roughness_factor
from .roughness import er_scatter_field
from .utd import diffraction_dyadic, transition_function, utd_coefficient, wedge_coefficients

__all__ = [
    "FieldSeries",
    "RayField",
    "diffraction_dyadic",
    "er_scatter_field",
    "field_series",
    "free_space_power",
    "fresnel_coefficients",
    "path_field",
    "reflection_dyadic",
    "roughness_factor",
    "transition_function",
    "utd_coefficient",
    "wedge_coefficients",
]
