# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Tests for the snapshot ray tracer and path validation."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from drt_engine.drt.extrapolation import attach_kinematics, extrapolate_paths
from drt_engine.errors import ConfigError
from drt_engine.rt.paths import InteractionKind, TraceConfig, path_id_of
from drt_engine.rt.sweep import enumerate_candidates, sweep_paths
from drt_engine.rt.tracer import trace_snapshot, validate_path
from drt_engine.rt.visibility import has_line_of_sight
from drt_engine.scene.builders import box_object, default_materials, terminal, wall_object
from drt_engine.scene.model import Scene
from drt_engine.scene.timeline import SceneTimeline

BIG = 1000.0


def big_wall(object_id, y, facing):
    return wall_object(object_id, (-BIG, y, -BIG), (BIG, y, -BIG), 2 * BIG, facing, diffraction="off")


def scene_of(objects, tx, rx, tx_velocity=(0.0, 0.0, 0.0)):
    return Scene(
        tuple(objects),
        terminal("tx", "TX", tx, tx_velocity, antenna="isotropic"),
        terminal("rx", "RX", rx, antenna="isotropic"),
        default_materials(),
    )


def by_id(paths):
    return {p.path_id: p for p in paths}


@pytest.mark.unit
class TestTraceConfig:
    """Tests for TraceConfig validation."""

    def test_defaults(self):
        config = TraceConfig()
        assert config.max_reflections == 2
        assert config.enable_diffraction and not config.enable_scattering

    @pytest.mark.parametrize("kwargs", [{"max_reflections": 5}, {"tile_size": 0.0}, {"threads": 0}])
    def test_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            TraceConfig(**kwargs)


@pytest.mark.unit
class TestTraceSnapshot:
    """Image-method tracing on small scenes."""

    def test_single_wall(self, wall_scene, reflections_only):
        paths = by_id(trace_snapshot(wall_scene, 0.0, reflections_only.replace(max_reflections=1)))
        assert set(paths) == {"LOS", "R[wall/f0]"}
        assert_allclose(paths["R[wall/f0]"].interactions[0].point, [4 / 3, 0.0, 0.0], atol=1e-12)

    def test_paths_sorted_by_delay(self, wall_scene):
        paths = trace_snapshot(wall_scene, 0.0)
        delays = [p.delay for p in paths]
        assert delays == sorted(delays)
        assert paths[0].is_los

    def test_screen_blocks_line_of_sight(self):
        screen = wall_object("screen", (2, 2.6, -1), (2, 3.4, -1), 2.0, (-1, 0, 0), diffraction="off")
        scene = scene_of([big_wall("wall", 0.0, (0, 1, 0)), screen], (0, 2, 0), (4, 4, 0))
        paths = by_id(trace_snapshot(scene, 0.0, TraceConfig(max_reflections=1)))
        assert set(paths) == {"R[wall/f0]"}

    def test_double_bounce_between_parallel_walls(self):
        walls = [big_wall("a", 0.0, (0, 1, 0)), big_wall("b", 10.0, (0, -1, 0))]
        scene = scene_of(walls, (0, 2, 0), (10, 4, 0))
        paths = by_id(trace_snapshot(scene, 0.0, TraceConfig(max_reflections=2, enable_diffraction=False)))
        assert {"LOS", "R[a/f0]", "R[b/f0]", "R[a/f0]>R[b/f0]", "R[b/f0]>R[a/f0]"} <= set(paths)
        double = paths["R[a/f0]>R[b/f0]"]
        assert_allclose(double.points[1], [10 / 9, 0.0, 0.0], atol=1e-6)
        assert_allclose(double.points[2], [20 / 3, 10.0, 0.0], atol=1e-6)
        assert double.signature == "RR"

    def test_unfolded_length_equals_image_distance(self):
        walls = [big_wall("a", 0.0, (0, 1, 0)), big_wall("b", 10.0, (0, -1, 0))]
        scene = scene_of(walls, (0, 2, 0), (10, 4, 0))
        paths = by_id(trace_snapshot(scene, 0.0, TraceConfig(enable_diffraction=False)))
        image = np.array([0.0, 22.0, 0.0])
        assert paths["R[a/f0]>R[b/f0]"].length == pytest.approx(np.linalg.norm(image - [10.0, 4.0, 0.0]))

    def test_diffraction_around_building_corner(self):
        block = box_object("block", (0, 0, 0), (10, 10, 10), "concrete")
        scene = scene_of([block], (-10, 2, 0), (2, -10, 0))
        paths = trace_snapshot(scene, 0.0, TraceConfig(max_reflections=0))
        assert not any(p.is_los for p in paths)
        corner = [p for p in paths if p.signature == "D" and np.allclose(p.points[1], [-5.0, -5.0, 0.0], atol=1e-9)]
        assert len(corner) == 1

    def test_threads_do_not_change_result(self, canyon):
        single = trace_snapshot(canyon, 1.0, TraceConfig(threads=1))
        multi = trace_snapshot(canyon, 1.0, TraceConfig(threads=4))
        assert [p.path_id for p in single] == [p.path_id for p in multi]
        assert [p.length for p in single] == [p.length for p in multi]

    def test_canyon_has_line_of_sight_and_wall_reflections(self, canyon):
        ids = {p.path_id for p in trace_snapshot(canyon, 0.0)}
        assert "LOS" in ids
        assert "R[wall_s/f0]" in ids and "R[wall_n/f0]" in ids


@pytest.mark.unit
class TestValidatePath:
    """Path validity at later instants."""

    def test_fresh_path_is_valid(self, wall_scene):
        for path in trace_snapshot(wall_scene, 0.0):
            assert validate_path(path, wall_scene, 0.0)

    def test_reflection_point_leaves_finite_wall(self):
        wall = wall_object("wall", (-5, 0, -5), (5, 0, -5), 10.0, (0, 1, 0), diffraction="off")
        scene = scene_of([wall], (0, 2, 0), (0, 4, 0), tx_velocity=(10.0, 0.0, 0.0))
        traced = attach_kinematics(trace_snapshot(scene, 0.0, TraceConfig(max_reflections=1)), scene)
        moved = by_id(extrapolate_paths(traced, scene, 1.0))
        assert moved["R[wall/f0]"].expired
        assert moved["R[wall/f0]"].expiry_reason == "point left face polygon"
        assert not moved["LOS"].expired

    def test_bus_blocks_line_of_sight(self, canyon):
        los = [p for p in trace_snapshot(canyon, 0.0) if p.is_los]
        moved = extrapolate_paths(attach_kinematics(los, canyon), canyon, 3.9)[0]
        assert moved.expired
        assert moved.expiry_reason == "segment obstructed"

    def test_line_of_sight_check(self, canyon):
        assert has_line_of_sight(canyon, 0.0)
        assert not has_line_of_sight(canyon, 3.9)

    def test_reversed_path_swaps_ends(self, wall_scene):
        path = by_id(trace_snapshot(wall_scene, 0.0))["R[wall/f0]"]
        back = path.reversed()
        assert_allclose(back.tx.position, path.rx.position)
        assert back.length == pytest.approx(path.length)


def angle_to(direction, axis):
    """Angle (rad) between a vector and an axis, well conditioned near 0 and pi."""
    return float(np.arctan2(np.linalg.norm(np.cross(direction, axis)), np.dot(direction, axis)))


def unit_rows(v):
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


@pytest.mark.unit
class TestInteractionGeometry:
    """Local laws at every traced interaction point."""

    @pytest.mark.parametrize("t", [0.0, 1.3, 2.9])
    def test_specular_angles(self, canyon, t):
        snap = canyon.snapshot(t)
        for path in trace_snapshot(canyon, t, TraceConfig(enable_diffraction=False), snapshot=snap):
            points = path.points
            for i, inter in enumerate(path.interactions, start=1):
                normal = snap.faces[inter.primitive_id].normal
                incoming = unit_rows(points[i - 1] - points[i])
                outgoing = unit_rows(points[i + 1] - points[i])
                assert abs(angle_to(incoming, normal) - angle_to(outgoing, normal)) < 1e-9, path.path_id

    @pytest.mark.parametrize("t", [0.0, 1.3, 2.9])
    def test_keller_cone(self, crossing, t):
        """Incoming and outgoing rays make the same angle with the diffracting edge."""
        snap = crossing.snapshot(t)
        paths = trace_snapshot(crossing, t, TraceConfig(max_reflections=1), snapshot=snap)
        diffracted = [p for p in paths if p.count(InteractionKind.DIFFRACTION)]
        assert diffracted
        for path in diffracted:
            points = path.points
            for i, inter in enumerate(path.interactions, start=1):
                if inter.kind is not InteractionKind.DIFFRACTION:
                    continue
                axis = snap.edges[inter.primitive_id].direction
                incoming = unit_rows(points[i] - points[i - 1])
                outgoing = unit_rows(points[i + 1] - points[i])
                assert abs(angle_to(incoming, axis) - angle_to(outgoing, axis)) < 1e-9, path.path_id


@pytest.mark.unit
class TestReciprocity:
    """Exchanging TX and RX reverses every path and keeps its length."""

    @pytest.mark.parametrize("scene_name", ["canyon", "crossing"])
    def test_swapped_terminals(self, request, scene_name):
        scene = request.getfixturevalue(scene_name)
        forward = {p.key: p.length for p in trace_snapshot(scene, 0.7)}
        backward = {tuple(reversed(p.key)): p.length for p in trace_snapshot(scene.swapped_terminals(), 0.7)}
        assert set(forward) == set(backward)
        for key, length in forward.items():
            assert backward[key] == pytest.approx(length, rel=1e-12), path_id_of(key)


@pytest.mark.unit
class TestSweep:
    """Whole-timeline path existence against tracing each instant."""

    @pytest.mark.parametrize("scene_name", ["canyon", "crossing", "bus_scene"])
    def test_matches_trace_at_every_step(self, request, scene_name):
        scene = request.getfixturevalue(scene_name)
        times = np.linspace(0.0, 4.5, 10)
        found = sweep_paths(SceneTimeline(scene, times))
        for k, t in enumerate(times):
            swept = {key for key, mask in found.items() if mask[k]}
            traced = {p.key for p in trace_snapshot(scene, float(t))}
            assert swept == traced, f"t={t}"

    def test_candidates_cover_the_config(self, canyon):
        plain = enumerate_candidates(canyon, TraceConfig(max_reflections=1, enable_diffraction=False))
        assert len(plain) == 1 + len(canyon.faces)
        keys = {c.key for c in enumerate_candidates(canyon, TraceConfig())}
        assert () in keys
        assert all(len(key) <= 2 for key in keys)

    def test_threads_do_not_change_result(self, canyon):
        timeline = SceneTimeline(canyon, [0.0, 1.0, 2.0])
        single = sweep_paths(timeline, threads=1)
        multi = sweep_paths(SceneTimeline(canyon, [0.0, 1.0, 2.0]), threads=3)
        assert set(single) == set(multi)
        for key in single:
            assert list(single[key]) == list(multi[key])

    def test_line_of_sight_disappears(self, canyon):
        found = sweep_paths(SceneTimeline(canyon, [0.0, 3.9]))
        assert list(found[()]) == [True, False]
