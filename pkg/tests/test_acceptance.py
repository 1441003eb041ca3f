# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Whole-scenario agreement between DRT and snapshot ray tracing."""

import math

import numpy as np
import pytest

from drt_engine.channel.doppler import doppler_shift, phase_doppler
from drt_engine.channel.profiles import ProfileLayout, build_pdfp, compare_runs, error_map
from drt_engine.channel.runner import run_drt
from drt_engine.channel.schedule import TcSchedule, parse_schedule
from drt_engine.drt.extrapolation import attach_kinematics, extrapolate_paths
from drt_engine.em.field import path_field
from drt_engine.rt.paths import TraceConfig
from drt_engine.rt.tracer import trace_snapshot
from drt_engine.scene.builders import box_object, default_materials, rotating_bus, terminal
from drt_engine.scene.model import Scene

F = 3e9


@pytest.mark.slow
class TestScenarios:
    def test_canyon_single_segment_is_faster(self, canyon):
        run = run_drt(canyon, 5.0, 0.2, schedule=TcSchedule(), reference=True)
        assert len(run.snapshots) == 26
        assert run.timing.speedup > 1.0

    def test_canyon_with_refresh_matches_reference(self, canyon):
        run = run_drt(canyon, 5.0, 0.2, schedule=parse_schedule("0,3", 5.0), reference=True)
        rays = compare_runs(run.snapshots, run.reference)
        assert rays.max_power_error_db < 1e-6
        assert rays.max_length_error < 1e-6

    def test_automatic_schedule_has_no_deaths(self, canyon):
        run = run_drt(canyon, 5.0, 0.2, schedule=TcSchedule.automatic(), reference=True)
        assert compare_runs(run.snapshots, run.reference).deaths == 0

    def test_canyon_batched_segments_speedup(self, canyon):
        run = run_drt(canyon, 5.0, 0.025, schedule=parse_schedule("0,2,4", 5.0), reference=True)
        assert len(run.snapshots) == 201
        assert run.timing.segments == 3
        assert run.timing.speedup >= 10.0

    def test_automatic_schedule_matches_reference_profile(self, canyon):
        """Refreshing on every birth and expiry leaves no gap in the power-Doppler profile."""
        run = run_drt(canyon, 5.0, 0.01, schedule=TcSchedule.automatic(), reference=True)
        layout = ProfileLayout.covering([run.snapshots, run.reference], "doppler")
        err = error_map(build_pdfp(run.snapshots, layout=layout), build_pdfp(run.reference, layout=layout))
        assert err.max_error < 1e-3
        rays = compare_runs(run.snapshots, run.reference)
        assert rays.births == 0
        assert rays.deaths == 0

    def test_rotating_bus(self, bus_scene):
        run = run_drt(bus_scene, 2.0, 0.1, schedule=TcSchedule.automatic(), reference=True)
        rays = compare_runs(run.snapshots, run.reference)
        assert rays.deaths == 0
        assert rays.max_length_error < 1e-6
        assert rays.max_doppler_error < 1e-2

    def test_intersection(self, crossing):
        run = run_drt(crossing, 2.0, 0.2, schedule=TcSchedule.automatic(), reference=True)
        assert compare_runs(run.snapshots, run.reference).deaths == 0


def traced(scene, t=0.0, config=None):
    paths = trace_snapshot(scene, t, config)
    return {p.path_id: p for p in attach_kinematics(paths, scene)}


@pytest.mark.integration
class TestDopplerBehaviour:
    """Doppler of the canonical scenarios."""

    def test_line_of_sight_changes_sign_at_closest_approach(self, canyon):
        # TX and RX are closest at t = 60 / (50 + 36) * 3.6 s
        closest = 60.0 / ((50.0 + 36.0) / 3.6)
        los = traced(canyon)["LOS"]
        for t in (0.5, 1.5, 2.3):
            moved = extrapolate_paths([los], canyon, t, validate=False)[0]
            assert doppler_shift(moved, F).shift > 0.0
        for t in (2.7, 3.5, 4.5):
            moved = extrapolate_paths([los], canyon, t, validate=False)[0]
            assert doppler_shift(moved, F).shift < 0.0
        assert 2.3 < closest < 2.7

    def test_rotating_bus_side_reflection(self):
        def shifts(scene):
            path = traced(scene, config=TraceConfig(max_reflections=1))["R[bus/f2]"]
            h = 1e-4
            before = extrapolate_paths([path], scene, -h, validate=False)[0]
            after = extrapolate_paths([path], scene, h, validate=False)[0]
            return doppler_shift(path, F).shift, phase_doppler(before.length, after.length, h, F)

        straight, straight_fd = shifts(rotating_bus(angular_speed=0.0))
        turning, turning_fd = shifts(rotating_bus())
        assert abs(straight) < 2.0
        assert turning > 1.0
        assert turning == pytest.approx(turning_fd, abs=0.1)
        assert straight == pytest.approx(straight_fd, abs=0.1)


@pytest.mark.integration
class TestShadowBoundary:
    """Total field across the line-of-sight shadow boundary of a building corner."""

    def test_field_is_continuous(self):
        corner = np.array([-5.0, -5.0, 0.0])
        tx = np.array([-15.0, 0.0, 0.0])
        boundary = math.atan2(corner[1] - tx[1], corner[0] - tx[0])
        straddle = math.radians(0.01)

        def total_field(angle):
            rx = corner + 20.0 * np.array([math.cos(angle), math.sin(angle), 0.0])
            scene = Scene(
                (box_object("block", (0, 0, 0), (10, 10, 10), "metal"),),
                terminal("tx", "TX", tx, antenna="dipole"),
                terminal("rx", "RX", rx, antenna="dipole"),
                default_materials(),
            )
            paths = trace_snapshot(scene, 0.0, TraceConfig(max_reflections=0))
            ids = {p.path_id for p in paths}
            return sum(path_field(p, scene).e_field[2] for p in paths), ids

        lit, lit_ids = total_field(boundary - straddle)
        shadow, shadow_ids = total_field(boundary + straddle)
        assert "LOS" in lit_ids and "LOS" not in shadow_ids
        assert abs(20.0 * math.log10(abs(lit) / abs(shadow))) < 0.1
