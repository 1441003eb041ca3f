# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Shared fixtures: canonical scenes and the shipped scenario files."""

from pathlib import Path

import pytest

from drt_engine.scene.builders import intersection, rotating_bus, single_wall, street_canyon
from drt_engine.rt.paths import TraceConfig

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture
def scenarios_dir():
    return SCENARIOS


@pytest.fixture
def wall_scene():
    """TX=(0,2,0), RX=(4,4,0) in front of a large static wall at y = 0."""
    return single_wall()


@pytest.fixture
def canyon():
    return street_canyon()


@pytest.fixture
def bus_scene():
    return rotating_bus()


@pytest.fixture
def crossing():
    return intersection()


@pytest.fixture
def reflections_only():
    return TraceConfig(max_reflections=2, enable_diffraction=False, enable_scattering=False)
