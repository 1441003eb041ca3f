# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Tests for closed-form interaction point kinematics and path extrapolation."""

import dataclasses
import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.spatial.transform import Rotation

from drt_engine.channel.doppler import doppler_shift
from drt_engine.drt.diffraction import (
    diffract_in_frame,
    diffract_series,
    diffraction_kinematics_local,
    diffraction_point_acceleration,
    diffraction_point_kinematics,
    diffraction_point_local,
    diffraction_point_velocity,
    shortest_path_point,
)
from drt_engine.drt.extrapolation import (
    attach_kinematics,
    extrapolate_paths,
    path_kinematics,
    solve_series,
    track_path,
)
from drt_engine.drt.reflection import (
    ImageSourceState,
    backtrack_multibounce,
    image_source_kinematics,
    reflect_in_frame,
    reflect_series,
    reflection_point_acceleration,
    reflection_point_kinematics_global,
    reflection_point_local,
    reflection_point_velocity,
)
from drt_engine.drt.scattering import scatter_point_kinematics
from drt_engine.errors import ConfigError, DegenerateGeometryError, FaceLeftError
from drt_engine.geometry.kinematics import KinematicState, LocalFrame, RigidMotion
from drt_engine.geometry.series import StateSeries
from drt_engine.geometry.vectors import Z_AXIS
from drt_engine.rt.tracer import trace_snapshot, validate_path, validate_series
from drt_engine.scene.builders import wall_object
from drt_engine.scene.model import Antenna, Face, SceneObject
from drt_engine.scene.timeline import SceneTimeline

H = 1e-5

WALL2_AXES = np.column_stack(((0.0, -1.0, 0.0), (1.0, 0.0, 0.0), (0.0, 0.0, 1.0)))


def state(position, velocity=(0, 0, 0), acceleration=(0, 0, 0), t=0.0):
    return KinematicState(np.array(position, float), np.array(velocity, float), np.array(acceleration, float), t)


def corner_frames(wall2_motion=None, dt=0.0):
    """Floor y = 0 and wall x = 0 meeting along the z axis."""
    wall2 = LocalFrame.attached(np.zeros(3), WALL2_AXES, wall2_motion or RigidMotion.static(), dt)
    return [LocalFrame.identity(), wall2]


@pytest.mark.unit
class TestReflectionPoint:
    """Reflection point on the local plane y = 0."""

    @pytest.mark.parametrize(
        "tx, rx, expected",
        [
            ((0, 2, 0), (4, 4, 0), (4 / 3, 0, 0)),
            ((-1, 1, 0), (1, 1, 0), (0, 0, 0)),
            ((0, 1, 0), (2, 1, 2), (1, 0, 1)),
        ],
    )
    def test_position(self, tx, rx, expected):
        assert_allclose(reflection_point_local(tx, rx), expected, atol=1e-12)

    def test_velocity_matches_finite_difference(self):
        tx, rx = np.array([0.0, 2.0, 0.0]), np.array([4.0, 4.0, 0.0])
        v_tx, v_rx = np.array([1.0, 0.5, 0.0]), np.array([0.0, -0.25, 2.0])
        fd = (reflection_point_local(tx + H * v_tx, rx + H * v_rx) - reflection_point_local(tx - H * v_tx, rx - H * v_rx)) / (2 * H)
        assert_allclose(reflection_point_velocity(tx, rx, v_tx, v_rx), fd, atol=1e-7)

    def test_receiver_moving_along_plane(self):
        v = reflection_point_velocity((0, 1, 0), (2, 1, 0), (0, 0, 0), (0, 0, 0))
        assert_allclose(v, 0.0, atol=1e-15)
        v = reflection_point_velocity((0, 1, 0), (2, 1, 0), (0, 0, 0), (0, 1, 0))
        assert v[0] == pytest.approx(-0.5)

    def test_acceleration(self):
        a = reflection_point_acceleration((0, 1, 0), (2, 1, 0), (0, 0, 0), (0, 0, 0), (1, 0, 0), (0, 0, 0))
        assert_allclose(a, [0.5, 0.0, 0.0], atol=1e-12)

    def test_acceleration_matches_finite_difference(self):
        tx0, v_tx, a_tx = np.array([0.0, 2.0, 0.0]), np.array([3.0, 1.0, 0.0]), np.array([0.0, -1.0, 0.5])
        rx0, v_rx, a_rx = np.array([5.0, 3.0, 1.0]), np.array([-1.0, 0.0, 0.0]), np.array([0.2, 0.0, 0.0])

        def q(t):
            return reflection_point_local(tx0 + v_tx * t + 0.5 * a_tx * t * t, rx0 + v_rx * t + 0.5 * a_rx * t * t)

        h = 1e-4
        fd = (q(h) - 2 * q(0.0) + q(-h)) / (h * h)
        assert_allclose(reflection_point_acceleration(tx0, rx0, v_tx, v_rx, a_tx, a_rx), fd, atol=1e-5)

    def test_degenerate_plane_raises(self):
        with pytest.raises(DegenerateGeometryError):
            reflection_point_local((0, 0, 0), (1, 0, 0))


@pytest.mark.unit
class TestReflectionOnMovingFace:
    """Reflection point on a face of a moving object, in global coordinates."""

    def test_static_wall(self, wall_scene):
        face = wall_scene.object("wall").faces[0]
        q = reflection_point_kinematics_global(face, RigidMotion.static(), wall_scene.transmitter.state,
                                               wall_scene.receiver.state, 0.0)
        assert_allclose(q.position, [4 / 3, 0, 0], atol=1e-12)

    def test_wall_moving_towards_terminals(self, wall_scene):
        face = wall_scene.object("wall").faces[0]
        motion = RigidMotion(translation_velocity=np.array([0.0, 1.0, 0.0]))
        q = reflection_point_kinematics_global(face, motion, wall_scene.transmitter.state,
                                               wall_scene.receiver.state, 1.0)
        assert_allclose(q.position, [1.0, 1.0, 0.0], atol=1e-12)
        assert_allclose(q.velocity, [-0.5, 1.0, 0.0], atol=1e-12)
        assert q.state.reference_time == 1.0

    def test_terminal_behind_face(self, wall_scene):
        face = wall_scene.object("wall").faces[0]
        with pytest.raises(FaceLeftError):
            reflection_point_kinematics_global(face, RigidMotion.static(), state((0, -2, 0)), state((4, 4, 0)), 0.0)


@pytest.mark.unit
class TestImageSources:
    """Image source kinematics and multi-bounce back-tracking."""

    def test_mirror_in_floor(self):
        image = image_source_kinematics(state((0, 2, 0), (1, 1, 0)), LocalFrame.identity())
        assert isinstance(image, ImageSourceState)
        assert image.depth == 1
        assert_allclose(image.position, [0, -2, 0])
        assert_allclose(image.velocity, [1, -1, 0])

    def test_double_mirror_restores_source(self):
        source = state((1, 2, 3), (1, 1, 0), (0, -1, 2))
        frame = LocalFrame.identity()
        twice = image_source_kinematics(image_source_kinematics(source, frame), frame)
        assert twice.depth == 2
        assert_allclose(twice.position, source.position)
        assert_allclose(twice.velocity, source.velocity)
        assert_allclose(twice.acceleration, source.acceleration)

    def test_corner_reflector_points(self):
        q1, q2 = backtrack_multibounce(corner_frames(), state((3, 1, 0), (1, 0, 0)), state((1, 4, 0)))
        assert_allclose(q1.position, [2.2, 0.0, 0.0], atol=1e-12)
        assert_allclose(q2.position, [0.0, 2.75, 0.0], atol=1e-12)

    def test_corner_reflector_velocity(self):
        tx, rx = state((3, 1, 0), (1, 0, 0)), state((1, 4, 0))
        points = backtrack_multibounce(corner_frames(), tx, rx)
        ahead = backtrack_multibounce(corner_frames(), tx.advanced(H), rx)
        behind = backtrack_multibounce(corner_frames(), tx.advanced(-H), rx)
        for q, qp, qm in zip(points, ahead, behind):
            assert_allclose(q.velocity, (qp.position - qm.position) / (2 * H), atol=1e-6)

    def test_corner_reflector_with_moving_wall(self):
        motion = RigidMotion(translation_velocity=np.array([0.5, 0.0, 0.0]))
        tx, rx = state((3, 1, 0), (1, 0, 0), (0, 0.2, 0)), state((1, 4, 0), (0, -0.5, 0))
        h = 1e-4

        def solve(dt):
            return backtrack_multibounce(corner_frames(motion, dt), tx.advanced(dt), rx.advanced(dt))

        now, ahead, behind = solve(0.0), solve(h), solve(-h)
        for q, qp, qm in zip(now, ahead, behind):
            assert_allclose(q.velocity, (qp.position - qm.position) / (2 * h), atol=1e-6)
            assert_allclose(q.acceleration, (qp.position - 2 * q.position + qm.position) / (h * h), atol=1e-4)


@pytest.mark.unit
class TestDiffractionPoint:
    """Diffraction point on the local z axis."""

    TX = np.array([0.0, -1.0, 2.0])
    RX = np.array([1.0, 1.0, 0.0])

    def test_position(self):
        q = diffraction_point_local(self.TX, self.RX)
        assert_allclose(q, [0.0, 0.0, 2 * math.sqrt(2) / (1 + math.sqrt(2))], atol=1e-12)

    def test_agrees_with_shortest_path_search(self):
        z = shortest_path_point(self.TX, self.RX, -10.0, 10.0)
        assert diffraction_point_local(self.TX, self.RX)[2] == pytest.approx(z, abs=1e-6)

    def test_velocity_matches_finite_difference(self):
        v_tx, v_rx = np.array([0.5, 0.2, -1.0]), np.array([0.0, 1.0, 0.3])
        fd = (diffraction_point_local(self.TX + H * v_tx, self.RX + H * v_rx)
              - diffraction_point_local(self.TX - H * v_tx, self.RX - H * v_rx)) / (2 * H)
        v = diffraction_point_velocity(self.TX, self.RX, v_tx, v_rx)
        assert_allclose(v, fd, atol=1e-7)
        assert v[0] == 0.0 and v[1] == 0.0

    def test_acceleration_matches_finite_difference(self):
        v_tx, v_rx = np.array([0.5, 0.2, -1.0]), np.array([0.0, 1.0, 0.3])
        a_tx, a_rx = np.array([0.0, 0.0, 1.0]), np.array([-0.3, 0.0, 0.0])

        def q(t):
            return diffraction_point_local(self.TX + v_tx * t + 0.5 * a_tx * t * t,
                                           self.RX + v_rx * t + 0.5 * a_rx * t * t)

        h = 1e-4
        fd = (q(h) - 2 * q(0.0) + q(-h)) / (h * h)
        assert_allclose(diffraction_point_acceleration(self.TX, self.RX, v_tx, v_rx, a_tx, a_rx), fd, atol=1e-5)

    def test_local_state_bundles_all_orders(self):
        q = diffraction_kinematics_local(state(self.TX, (0, 0, 1)), state(self.RX))
        assert q.position[2] == pytest.approx(diffraction_point_local(self.TX, self.RX)[2])
        assert q.velocity[2] > 0.0

    def test_terminal_on_edge_raises(self):
        with pytest.raises(DegenerateGeometryError):
            diffraction_point_local((0, 0, 1), (1, 1, 0))


@pytest.mark.unit
class TestScatterPoint:
    """Tiles ride rigidly on their object."""

    def test_translating_tile(self):
        motion = RigidMotion(translation_velocity=np.array([-30 / 3.6, 0.0, 0.0]))
        s = scatter_point_kinematics((1.0, 2.0, 3.0), motion, 2.0)
        assert_allclose(s.position, [1.0 - 60 / 3.6, 2.0, 3.0])
        assert_allclose(s.velocity, [-30 / 3.6, 0.0, 0.0])
        assert s.reference_time == 2.0

    def test_rotating_tile(self):
        motion = RigidMotion(rotation_axis=Z_AXIS.copy(), angular_speed=1.0)
        s = scatter_point_kinematics((2.0, 0.0, 0.0), motion, math.pi / 2)
        assert_allclose(s.position, [0.0, 2.0, 0.0], atol=1e-12)
        assert np.linalg.norm(s.velocity) == pytest.approx(2.0)
        assert_allclose(s.acceleration, [0.0, -2.0, 0.0], atol=1e-12)


@pytest.mark.unit
class TestExtrapolation:
    """Prolonging a traced path set in time."""

    def test_matches_fresh_trace(self, canyon):
        traced = attach_kinematics(trace_snapshot(canyon, 0.0), canyon)
        moved = extrapolate_paths(traced, canyon, 0.5)
        fresh = {p.path_id: p for p in trace_snapshot(canyon, 0.5)}
        compared = 0
        for path in moved:
            if path.expired or path.path_id not in fresh:
                continue
            assert_allclose(path.points, fresh[path.path_id].points, atol=1e-6)
            compared += 1
        assert compared >= 3

    def test_keeps_order_and_count(self, canyon):
        traced = trace_snapshot(canyon, 0.0)
        moved = extrapolate_paths(traced, canyon, 4.0)
        assert [p.path_id for p in moved] == [p.path_id for p in traced]
        assert all(p.time == 4.0 for p in moved)

    def test_taylor_close_to_exact_for_short_step(self, canyon):
        traced = attach_kinematics(trace_snapshot(canyon, 0.0), canyon)
        exact = extrapolate_paths(traced, canyon, 0.01, validate=False)
        taylor = extrapolate_paths(traced, canyon, 0.01, validate=False, method="taylor")
        for a, b in zip(exact, taylor):
            if not (a.expired or b.expired):
                assert_allclose(a.points, b.points, atol=1e-5)

    def test_threads_give_same_result(self, canyon):
        traced = attach_kinematics(trace_snapshot(canyon, 0.0), canyon)
        one = extrapolate_paths(traced, canyon, 1.0)
        many = extrapolate_paths(traced, canyon, 1.0, threads=4)
        assert [(p.path_id, p.expired) for p in one] == [(p.path_id, p.expired) for p in many]

    def test_expired_path_stays_expired(self, canyon):
        los = [p for p in trace_snapshot(canyon, 0.0) if p.is_los]
        gone = extrapolate_paths(los, canyon, 3.9)
        back = extrapolate_paths(gone, canyon, -3.9)
        assert back[0].expired

    def test_unknown_method(self, canyon):
        with pytest.raises(ConfigError):
            extrapolate_paths([], canyon, 1.0, method="spline")


@pytest.mark.unit
class TestEdgeSegment:
    """The diffraction point must stay on the finite edge."""

    WALL = wall_object("w", (-5.0, 0.0, 0.0), (5.0, 0.0, 0.0), 10.0, (0.0, 1.0, 0.0))

    def vertical_edge(self):
        return next(e for e in self.WALL.edges if abs(e.direction[2]) == pytest.approx(1.0))

    def test_point_inside_segment(self):
        edge = self.vertical_edge()
        base = edge.start.copy()
        base[2] = 0.0
        tx, rx = state(base + (-3.0, 4.0, 5.0)), state(base + (6.0, 2.0, 5.0))
        found = diffraction_point_kinematics(edge, RigidMotion.static(), tx, rx, 0.0)
        assert found.parameter == pytest.approx(5.0)
        assert found.position[2] == pytest.approx(5.0)

    def test_point_above_edge_raises(self):
        edge = self.vertical_edge()
        base = edge.start.copy()
        base[2] = 0.0
        tx, rx = state(base + (-3.0, 4.0, 25.0)), state(base + (6.0, 2.0, 25.0))
        with pytest.raises(FaceLeftError) as info:
            diffraction_point_kinematics(edge, RigidMotion.static(), tx, rx, 0.0)
        assert edge.edge_id in str(info.value)

    def test_moving_terminals_carry_the_point_off(self):
        """A point inside at t = 0 leaves the edge once both terminals have climbed past its top."""
        edge = self.vertical_edge()
        base = edge.start.copy()
        base[2] = 0.0
        tx = state(base + (-3.0, 4.0, 5.0), (0.0, 0.0, 4.0))
        rx = state(base + (6.0, 2.0, 5.0), (0.0, 0.0, 4.0))
        diffraction_point_kinematics(edge, RigidMotion.static(), tx, rx, 0.0)
        with pytest.raises(FaceLeftError):
            diffraction_point_kinematics(edge, RigidMotion.static(), tx.advanced(2.0), rx.advanced(2.0), 2.0)


@pytest.mark.unit
class TestTimelineRows:
    """Whole-timeline kinematics agree row by row with the per-instant functions."""

    TIMES = [0.0, 0.4, 1.0, 2.2, 3.0]

    def test_reflection_rows(self, canyon):
        timeline = SceneTimeline(canyon, self.TIMES)
        dt = np.asarray(self.TIMES)
        rx = StateSeries.from_state(state((10.0, -10.0, 1.5), (1.0, 0.5, 0.0), (0.0, 0.2, 0.0)), dt)
        rows, ok = reflect_series(timeline.face_frame("bus/f2"), timeline.tx, rx)
        assert ok.all()
        for k, t in enumerate(self.TIMES):
            frame = canyon.snapshot(t).face_frame("bus/f2")
            expected = reflect_in_frame(frame, timeline.tx.at(k, t), rx.at(k, t))
            assert_allclose(rows.position[k], expected.position, atol=1e-9)
            assert_allclose(rows.velocity[k], expected.velocity, atol=1e-9)
            assert_allclose(rows.acceleration[k], expected.acceleration, atol=1e-8)

    def test_diffraction_rows(self, canyon):
        timeline = SceneTimeline(canyon, self.TIMES)
        for edge in [e for e in canyon.edges if e.object_id == "bus"][:4]:
            rows, z, ok = diffract_series(timeline.edge_frame(edge.edge_id), timeline.tx, timeline.rx)
            for k, t in enumerate(self.TIMES):
                if not ok[k]:
                    continue
                frame = canyon.snapshot(t).edge_frame(edge.edge_id)
                expected, z_k = diffract_in_frame(frame, timeline.tx.at(k, t), timeline.rx.at(k, t))
                assert z[k] == pytest.approx(z_k, abs=1e-9)
                assert_allclose(rows.position[k], expected.position, atol=1e-9)
                assert_allclose(rows.velocity[k], expected.velocity, atol=1e-9)
                assert_allclose(rows.acceleration[k], expected.acceleration, atol=1e-8)

    def test_solved_paths(self, canyon):
        timeline = SceneTimeline(canyon, self.TIMES)
        for path in trace_snapshot(canyon, 0.0):
            states, check = solve_series(path, timeline)
            assert len(states) == len(path.interactions) + 2
            for k, t in enumerate(self.TIMES):
                if not check.valid[k]:
                    continue
                expected = path_kinematics(path, canyon.snapshot(t))
                for row, vertex in zip(states, expected.vertices):
                    assert_allclose(row.position[k], vertex.position, atol=1e-9)
                    assert_allclose(row.velocity[k], vertex.velocity, atol=1e-9)

    def test_validation_rows(self, canyon):
        times = [0.0, 1.0, 2.0, 3.0, 3.9, 4.5]
        timeline = SceneTimeline(canyon, times)
        for path in trace_snapshot(canyon, 0.0):
            states, check = solve_series(path, timeline)
            positions = np.stack([s.position for s in states])
            valid = validate_series(path, positions, timeline).valid
            for k, t in enumerate(times):
                if not check.valid[k]:
                    continue
                moved = path_kinematics(path, canyon.snapshot(t))
                assert valid[k] == bool(validate_path(moved, canyon, t)), f"{path.path_id} at t={t}"

    def test_tracks_expire_with_extrapolation(self, canyon):
        times = [0.0, 1.0, 2.0, 3.0, 3.9, 4.5]
        timeline = SceneTimeline(canyon, times)
        for path in attach_kinematics(trace_snapshot(canyon, 0.0), canyon):
            track = track_path(path, timeline)
            gone = [extrapolate_paths([path], canyon, t)[0].expired for t in times]
            first = gone.index(True) if any(gone) else None
            assert track.expiry == first, path.path_id
            if first is not None:
                assert not track.live[first:].any()
                assert track.path_at(first).expired

    def test_track_rows_are_paths(self, canyon):
        timeline = SceneTimeline(canyon, self.TIMES)
        los = next(p for p in attach_kinematics(trace_snapshot(canyon, 0.0), canyon) if p.is_los)
        track = track_path(los, timeline)
        assert track.positions.shape == (2, len(self.TIMES), 3)
        moved = track.path_at(2)
        assert moved.time == self.TIMES[2]
        assert moved.length == pytest.approx(extrapolate_paths([los], canyon, self.TIMES[2])[0].length)


def moved_scene(scene, rotation, shift):
    """The whole scene, motions and terminals carried by one rigid transform."""

    def point(p):
        return rotation @ np.asarray(p, dtype=float) + shift

    def motion(m):
        return dataclasses.replace(
            m,
            translation_velocity=rotation @ m.translation_velocity,
            translation_acceleration=rotation @ m.translation_acceleration,
            rotation_center=point(m.rotation_center),
            rotation_axis=rotation @ m.rotation_axis,
        )

    def terminal(term):
        s = term.state
        moved = KinematicState(point(s.position), rotation @ s.velocity, rotation @ s.acceleration, s.reference_time)
        return dataclasses.replace(term, state=moved, antenna=Antenna(term.antenna.kind, rotation @ term.antenna.axis))

    objects = tuple(
        SceneObject(
            obj.object_id,
            tuple(Face(f.face_id, np.array([point(v) for v in f.vertices]), f.material) for f in obj.faces),
            motion(obj.motion),
            obj.closed,
            obj.diffraction,
        )
        for obj in scene.objects
    )
    return dataclasses.replace(
        scene, objects=objects, transmitter=terminal(scene.transmitter), receiver=terminal(scene.receiver)
    )


@pytest.mark.integration
class TestFrameIndependence:
    """Path lengths and Doppler shifts do not depend on where the world frame sits."""

    ROTATION = Rotation.from_rotvec([0.3, -0.5, 0.9]).as_matrix()
    SHIFT = np.array([120.0, -40.0, 7.0])

    @pytest.mark.parametrize("scene_name", ["canyon", "bus_scene"])
    def test_lengths_and_doppler(self, request, scene_name):
        scene = request.getfixturevalue(scene_name)
        other = moved_scene(scene, self.ROTATION, self.SHIFT)
        carrier = scene.frequency
        for t in (0.0, 0.8, 1.7):
            here = {p.path_id: p for p in attach_kinematics(trace_snapshot(scene, t), scene)}
            there = {p.path_id: p for p in attach_kinematics(trace_snapshot(other, t), other)}
            assert set(here) == set(there), f"t={t}"
            for path_id, path in here.items():
                assert there[path_id].length == pytest.approx(path.length, rel=1e-9)
                shift = doppler_shift(path, carrier).shift
                assert doppler_shift(there[path_id], carrier).shift == pytest.approx(shift, rel=1e-7, abs=1e-6)

    def test_extrapolated_lengths(self, canyon):
        other = moved_scene(canyon, self.ROTATION, self.SHIFT)
        here = extrapolate_paths(attach_kinematics(trace_snapshot(canyon, 0.0), canyon), canyon, 2.5)
        there = extrapolate_paths(attach_kinematics(trace_snapshot(other, 0.0), other), other, 2.5)
        assert [p.path_id for p in here] == [p.path_id for p in there]
        for a, b in zip(here, there):
            assert a.expired == b.expired
            assert b.length == pytest.approx(a.length, rel=1e-9)
