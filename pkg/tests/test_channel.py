# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Tests for Doppler, profiles, schedules, the DRT runner and CSV export."""

import csv
import json
import math

import numpy as np
import pytest

from drt_engine.channel.doppler import doppler_series, doppler_shift, phase_doppler
from drt_engine.channel.export import (
    RAY_COLUMNS,
    read_manifest,
    write_manifest,
    write_profile_csv,
    write_rays_csv,
    write_timing_csv,
)
from drt_engine.channel.profiles import (
    ProfileLayout,
    build_pdfp,
    build_pdp,
    compare_runs,
    error_map,
)
from drt_engine.channel.runner import BIRTH, EXPIRY, TimingReport, run_drt, run_snapshot_rt, step_times
from drt_engine.channel.samples import ChannelSample, ChannelSnapshot
from drt_engine.channel.schedule import AUTO_BIRTH, AUTO_EXPIRY, MANUAL, TcSchedule, parse_schedule
from drt_engine.constants import SPEED_OF_LIGHT
from drt_engine.drt.extrapolation import attach_kinematics, extrapolate_paths, track_path
from drt_engine.errors import ConfigError, EmptyInputError, InvalidPathError, LayoutMismatchError
from drt_engine.rt.paths import TraceConfig
from drt_engine.rt.tracer import trace_snapshot
from drt_engine.scene.builders import default_materials, street_canyon, terminal, wall_object
from drt_engine.scene.model import Scene
from drt_engine.scene.timeline import SceneTimeline

F = 3e9


def sample(t, path_id, delay=1.5e-8, doppler=0.0, power=1e-3, length=4.5):
    return ChannelSample(t, path_id, "LOS" if path_id == "LOS" else "R", delay, doppler, power, complex(power ** 0.5), length)


def two_terminal_scene(tx_velocity):
    wall = wall_object("far", (-500, -50, -10), (500, -50, -10), 20.0, (0, 1, 0), diffraction="off")
    return Scene(
        (wall,),
        terminal("tx", "TX", (0, 0, 0), tx_velocity, antenna="isotropic"),
        terminal("rx", "RX", (100, 0, 0), antenna="isotropic"),
        default_materials(),
    )


def los_of(scene):
    paths = attach_kinematics(trace_snapshot(scene, 0.0, TraceConfig(max_reflections=0)), scene)
    return next(p for p in paths if p.is_los)


@pytest.mark.unit
class TestDoppler:
    """Doppler shift from vertex velocities."""

    def test_approaching_transmitter(self):
        shift = doppler_shift(los_of(two_terminal_scene((10, 0, 0))), F).shift
        assert shift == pytest.approx(F * 10 / (SPEED_OF_LIGHT - 10), rel=1e-9)

    def test_receding_transmitter(self):
        ray = doppler_shift(los_of(two_terminal_scene((-10, 0, 0))), F)
        assert ray.shift < 0.0
        assert ray.frequency == pytest.approx(F + ray.shift)

    def test_static_channel_has_no_shift(self, wall_scene):
        for path in attach_kinematics(trace_snapshot(wall_scene, 0.0), wall_scene):
            assert doppler_shift(path, F).shift == 0.0

    def test_matches_phase_derivative(self, canyon):
        traced = attach_kinematics(trace_snapshot(canyon, 0.0), canyon)
        h = 1e-3
        before = extrapolate_paths(traced, canyon, -h, validate=False)
        after = extrapolate_paths(traced, canyon, h, validate=False)
        for path, b, a in zip(traced, before, after):
            expected = phase_doppler(b.length, a.length, h, F)
            assert doppler_shift(path, F).shift == pytest.approx(expected, abs=1e-3)

    def test_series_rows_match_single_instants(self, canyon):
        """Row k of doppler_series equals doppler_shift of the path moved to times[k]."""
        times = [0.0, 0.4, 1.1, 2.5]
        timeline = SceneTimeline(canyon, times)
        for path in attach_kinematics(trace_snapshot(canyon, 0.0), canyon):
            shifts = doppler_series(track_path(path, timeline, validate=False).states, F)
            assert shifts.shape == (len(times),)
            for k, t in enumerate(times):
                moved = extrapolate_paths([path], canyon, t, validate=False)[0]
                assert shifts[k] == pytest.approx(doppler_shift(moved, F).shift, rel=1e-9, abs=1e-6)

    def test_requires_kinematics(self, wall_scene):
        path = trace_snapshot(wall_scene, 0.0)[0]
        with pytest.raises(InvalidPathError):
            doppler_shift(path, F)


@pytest.mark.unit
class TestProfiles:
    """Power-delay and power-Doppler profiles."""

    SNAPSHOTS = [
        ChannelSnapshot(0.0, (sample(0.0, "LOS", 1.5e-8), sample(0.0, "R[a]", 2.5e-8, power=2e-3))),
        ChannelSnapshot(0.2, (sample(0.2, "LOS", 1.6e-8), sample(0.2, "R[a]", 1.2e-8, power=2e-3))),
    ]

    def test_pdp_layout_and_power(self):
        grid = build_pdp(self.SNAPSHOTS)
        assert grid.layout.shape == (2, 3)
        assert grid.power_w[0, 1] == pytest.approx(1e-3)
        assert grid.power_w[0, 2] == pytest.approx(2e-3)
        assert grid.power_w[1, 1] == pytest.approx(3e-3)
        assert grid.counts[1, 1] == 2
        assert grid.total_power == pytest.approx(6e-3)
        assert np.isnan(grid.power_dbm[0, 0])

    def test_doppler_bins_are_centred(self):
        snaps = [ChannelSnapshot(0.0, (
            sample(0.0, "LOS", doppler=0.0),
            sample(0.0, "R[a]", doppler=0.49 * 14.34),
            sample(0.0, "R[b]", doppler=-14.34),
        ))]
        grid = build_pdfp(snaps)
        assert grid.layout.axis_start == -1
        assert grid.counts.tolist() == [[1, 2]]
        assert grid.layout.axis_centers[1] == pytest.approx(0.0)

    def test_empty_input(self):
        with pytest.raises(EmptyInputError):
            build_pdp([])

    def test_error_map_of_identical_grids(self):
        grid = build_pdp(self.SNAPSHOTS)
        errors = error_map(grid, grid)
        assert errors.max_error == 0.0
        assert errors.structural == 0

    def test_error_map_of_scaled_grid(self):
        grid = build_pdp(self.SNAPSHOTS)
        assert error_map(grid, grid.scaled(3.0)).max_error == pytest.approx(3.0)

    def test_error_map_counts_structural_bins(self):
        layout = ProfileLayout.covering([self.SNAPSHOTS], "delay")
        full = build_pdp(self.SNAPSHOTS, layout=layout)
        partial = build_pdp(self.SNAPSHOTS[:1], layout=layout)
        assert error_map(full, partial).structural == 1

    def test_error_map_layout_mismatch(self):
        with pytest.raises(LayoutMismatchError):
            error_map(build_pdp(self.SNAPSHOTS), build_pdp(self.SNAPSHOTS[:1]))

    def test_compare_runs(self):
        other = [
            ChannelSnapshot(0.0, (sample(0.0, "LOS", 1.5e-8, power=2e-3),)),
            ChannelSnapshot(0.2, self.SNAPSHOTS[1].samples),
        ]
        result = compare_runs(other, self.SNAPSHOTS)
        assert result.births == 1
        assert result.deaths == 0
        assert result.max_power_error_db == pytest.approx(10 * math.log10(2))
        assert result.steps == 2

    def test_compare_runs_needs_same_instants(self):
        with pytest.raises(LayoutMismatchError):
            compare_runs(self.SNAPSHOTS[:1], self.SNAPSHOTS[1:])


@pytest.mark.unit
class TestSchedule:
    """T_C schedule parsing."""

    def test_auto(self):
        schedule = parse_schedule("auto", 5.0)
        assert schedule.auto
        assert str(schedule) == "auto"

    @pytest.mark.parametrize("text, instants", [("0,3", (0.0, 3.0)), ("3", (0.0, 3.0)), ("", (0.0,))])
    def test_manual(self, text, instants):
        schedule = parse_schedule(text, 5.0)
        assert schedule.instants == instants
        assert set(schedule.notes) == {MANUAL}

    @pytest.mark.parametrize("text", ["3,1", "5", "-1", "x", "1,1"])
    def test_invalid(self, text):
        with pytest.raises(ConfigError):
            parse_schedule(text, 5.0)

    def test_segments(self):
        assert parse_schedule("0,3", 5.0).segments(5.0) == [(0.0, 3.0), (3.0, 5.0)]

    def test_refresh_appends(self):
        schedule = TcSchedule.automatic().with_refresh(2.0)
        assert schedule.instants == (0.0, 2.0)
        assert schedule.notes == (MANUAL, AUTO_EXPIRY)
        with pytest.raises(ConfigError):
            schedule.with_refresh(1.0)


@pytest.mark.unit
class TestRunner:
    """Sampling grid and timing report."""

    def test_step_times(self):
        times = step_times(0.0, 1.0, 0.2)
        assert len(times) == 6
        assert times[-1] == pytest.approx(1.0)

    @pytest.mark.parametrize("span, step", [(1.0, 0.0), (0.1, 0.2), (1.0, math.nan)])
    def test_step_times_invalid(self, span, step):
        with pytest.raises(ConfigError):
            step_times(0.0, span, step)

    def test_speedup(self):
        assert TimingReport(drt_total=2.0, reference=10.0).speedup == pytest.approx(5.0)
        assert TimingReport(drt_total=2.0).speedup is None

    def test_unknown_method(self, wall_scene):
        with pytest.raises(ConfigError):
            run_drt(wall_scene, 1.0, 0.5, method="spline")


@pytest.fixture
def bus_in_the_way():
    """Street canyon with the bus between TX and RX at t = 0; it clears the line of sight within a second."""
    return street_canyon(bus_center=(0.0, 0.0, 1.5))


@pytest.mark.integration
class TestRunDRT:
    """Whole runs on the street canyon."""

    def test_single_segment_matches_reference(self, canyon):
        run = run_drt(canyon, 1.0, 0.5, reference=True)
        assert run.times == pytest.approx([0.0, 0.5, 1.0])
        result = compare_runs(run.snapshots, run.reference)
        assert result.max_length_error < 1e-6
        assert result.max_power_error_db < 1e-6
        assert result.max_doppler_error < 1e-3
        assert run.timing.speedup is not None

    def test_manual_segments(self, canyon):
        run = run_drt(canyon, 1.0, 0.5, schedule=parse_schedule("0,0.5", 1.0))
        assert [s.segment for s in run.snapshots] == [0, 1, 1]
        assert run.refreshes == 1
        assert run.timing.segments == 2

    def test_automatic_refresh_on_expiry(self, canyon):
        run = run_drt(canyon, 4.5, 0.5, schedule=TcSchedule.automatic())
        assert run.refreshes >= 1
        assert set(run.schedule.notes[1:]) <= {AUTO_EXPIRY, AUTO_BIRTH}
        assert AUTO_EXPIRY in run.schedule.notes
        for snap in run.snapshots:
            assert not snap.expired

    def test_manual_run_carries_expired_paths(self, canyon):
        run = run_drt(canyon, 4.5, 0.5)
        last = run.snapshots[-1]
        assert any(p.is_los for p in last.expired)
        assert "LOS" not in {s.path_id for s in last.samples}

    def test_manual_run_reports_expiries(self, canyon):
        run = run_drt(canyon, 4.5, 0.5)
        assert run.expiries >= 1
        los = [e for e in run.events if e.path_id == "LOS"]
        assert [e.kind for e in los] == [EXPIRY]
        assert los[0].reason

    def test_manual_run_reports_births(self, bus_in_the_way):
        """A blocked line of sight that clears mid-segment is reported, not added."""
        run = run_drt(bus_in_the_way, 2.0, 0.1, reference=True)
        born = [e for e in run.events if e.path_id == "LOS"]
        assert [e.kind for e in born] == [BIRTH]
        assert 0.0 < born[0].time < 2.0
        assert run.births >= 1
        assert "LOS" not in {s.path_id for s in run.snapshots[-1].samples}
        assert "LOS" in {s.path_id for s in run.reference[-1].samples}

    def test_automatic_refresh_on_birth(self, bus_in_the_way):
        run = run_drt(bus_in_the_way, 2.0, 0.1, schedule=TcSchedule.automatic(), reference=True)
        assert AUTO_BIRTH in run.schedule.notes
        assert "LOS" in {s.path_id for s in run.snapshots[-1].samples}
        assert compare_runs(run.snapshots, run.reference).births == 0

    def test_reference_runs_every_instant(self, canyon):
        snaps = run_snapshot_rt(canyon, [0.0, 3.9])
        assert "LOS" in {s.path_id for s in snaps[0].samples}
        assert "LOS" not in {s.path_id for s in snaps[1].samples}


@pytest.mark.unit
class TestExport:
    """CSV and manifest files."""

    def test_rays_csv(self, tmp_path):
        out = write_rays_csv(tmp_path / "rays.csv", TestProfiles.SNAPSHOTS)
        with open(out, newline="") as f:
            rows = list(csv.reader(f))
        assert rows[0] == RAY_COLUMNS
        assert len(rows) == 5
        assert rows[1][2] == "LOS"
        assert float(rows[1][7]) == pytest.approx(0.0)

    def test_profile_csv(self, tmp_path):
        out = write_profile_csv(tmp_path / "pdp.csv", build_pdp(TestProfiles.SNAPSHOTS))
        header, *rows = out.read_text().splitlines()
        assert header == "t_bin_s,delay_s,power_dbm"
        assert len(rows) == 3

    def test_timing_csv(self, tmp_path):
        out = write_timing_csv(tmp_path / "timing.csv", TimingReport(drt_total=1.0, reference=3.0))
        text = out.read_text()
        assert "speedup,3" in text
        assert "sweep_s," in text
        assert text.startswith("metric,value\n")

    def test_manifest_round_trip(self, tmp_path):
        rays = write_rays_csv(tmp_path / "rays.csv", TestProfiles.SNAPSHOTS)
        assert write_manifest(tmp_path / "manifest.json", {"mode": "drt"}, [rays], "0.1.0")
        manifest = read_manifest(tmp_path / "manifest.json")
        assert manifest == {"version": "0.1.0", "config": {"mode": "drt"}, "outputs": ["rays.csv"]}

    def test_manifest_failure_returns_false(self, tmp_path):
        assert not write_manifest(tmp_path / "manifest.json", {"bad": object()}, [], "0.1.0")

    def test_manifest_is_json(self, tmp_path):
        write_manifest(tmp_path / "m.json", {"span": 5.0}, [], "dev")
        assert json.loads((tmp_path / "m.json").read_text())["config"]["span"] == 5.0
