# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Tests for the scene model, the builders and the scene file format."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from drt_engine.constants import KMH
from drt_engine.errors import (
    DuplicateIdError,
    SceneSyntaxError,
    SceneValidationError,
    UnknownObjectError,
)
from drt_engine.geometry.kinematics import RigidMotion
from drt_engine.scene.builders import (
    box_object,
    intersection,
    rotating_bus,
    single_wall,
    street_canyon,
    terminal,
    wall_object,
)
from drt_engine.scene.model import Face, Material, Scene, SceneObject, tessellate
from drt_engine.scene.parser import load_scene, parse_scene, save_scene, serialize_scene

MINIMAL = """\
scene minimal
GEOMETRY
material concrete eps=5 sigma=0.01
object wall open material=concrete
  wall from=(-50, 0, 0) to=(50, 0, 0) height=10 facing=(0, 1, 0)
end
DYNAMICS
terminal tx role=TX position=(-10, 5, 1.5) velocity=(36, 0, 0)kmh
terminal rx role=RX position=(10, 8, 1.5)
"""


@pytest.mark.unit
class TestFace:
    """Tests for planar faces."""

    def test_two_vertices_rejected(self):
        with pytest.raises(SceneValidationError):
            Face("w/f0", np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]]), "concrete")

    def test_non_planar_rejected(self):
        verts = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.5]])
        with pytest.raises(SceneValidationError, match="coplanar"):
            Face("w/f0", verts, "concrete")

    def test_normal_follows_winding(self):
        face = Face("w/f0", np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0]]), "concrete")
        assert_allclose(face.normal, [0.0, 0.0, 1.0])
        assert face.area == pytest.approx(0.5)

    def test_contains(self):
        wall = wall_object("w", (0, 0, 0), (10, 0, 0), 5.0, (0, 1, 0)).faces[0]
        assert wall.contains(np.array([5.0, 0.0, 2.0]))
        assert not wall.contains(np.array([11.0, 0.0, 2.0]))
        assert not wall.contains(np.array([5.0, 0.1, 2.0]))

    def test_tessellation_covers_face(self):
        wall = wall_object("w", (0, 0, 0), (12, 0, 0), 4.0, (0, 1, 0)).faces[0]
        tiles = tessellate(wall, 5.0)
        assert len(tiles) == 3
        assert sum(t.area for t in tiles) == pytest.approx(wall.area)


@pytest.mark.unit
class TestSceneObject:
    """Edges derived from face adjacency."""

    def test_box_has_twelve_diffracting_edges(self):
        box = box_object("bus", (0, 0, 1.5), (12, 2.5, 3))
        assert len(box.edges) == 12
        assert all(e.diffracting for e in box.edges)
        assert all(e.wedge_angle == pytest.approx(math.pi / 2) for e in box.edges)

    def test_open_wall_edges_are_half_planes(self):
        wall = wall_object("w", (0, 0, 0), (10, 0, 0), 5.0, (0, 1, 0))
        assert len(wall.edges) == 4
        assert all(e.n == pytest.approx(2.0) for e in wall.edges)

    def test_diffraction_off(self):
        wall = wall_object("w", (0, 0, 0), (10, 0, 0), 5.0, (0, 1, 0), diffraction="off")
        assert not any(e.diffracting for e in wall.edges)

    def test_closed_object_with_free_side_rejected(self):
        face = wall_object("w", (0, 0, 0), (10, 0, 0), 5.0, (0, 1, 0)).faces[0]
        with pytest.raises(SceneValidationError, match="closed"):
            SceneObject("w", (face,), closed=True)


@pytest.mark.unit
class TestScene:
    """Scene construction, lookup and posing."""

    def test_minimal_scene(self, wall_scene):
        assert len(wall_scene.objects) == 1
        assert wall_scene.transmitter.role == "TX"
        assert wall_scene.receiver.role == "RX"

    def test_street_canyon_has_five_objects(self, canyon):
        assert [o.object_id for o in canyon.objects] == ["wall_s", "wall_n", "wall_w", "wall_e", "bus"]
        assert_allclose(canyon.object("bus").motion.translation_velocity, [-30 * KMH, 0.0, 0.0])

    def test_unknown_material(self):
        wall = wall_object("w", (0, 0, 0), (10, 0, 0), 5.0, (0, 1, 0), material="glass")
        with pytest.raises(SceneValidationError, match="glass"):
            Scene((wall,), terminal("tx", "TX", (0, 1, 1)), terminal("rx", "RX", (1, 1, 1)), {})

    def test_duplicate_object_ids(self):
        a = wall_object("w", (0, 0, 0), (10, 0, 0), 5.0, (0, 1, 0))
        materials = {"concrete": Material("concrete", 5.0, 0.01)}
        with pytest.raises(DuplicateIdError):
            Scene((a, a), terminal("tx", "TX", (0, 1, 1)), terminal("rx", "RX", (1, 1, 1)), materials)

    def test_unknown_lookup(self, wall_scene):
        with pytest.raises(UnknownObjectError):
            wall_scene.object("bus")

    def test_static_object_keeps_geometry(self, canyon):
        snap = canyon.snapshot(3.0)
        assert_allclose(snap.faces["wall_s/f0"].vertices, canyon.face("wall_s/f0").vertices)

    def test_translating_wall_shifts(self):
        motion = RigidMotion(translation_velocity=(-30 * KMH, 0.0, 0.0))
        wall = wall_object("w", (0, 0, 0), (10, 0, 0), 5.0, (0, 1, 0), motion=motion)
        scene = Scene((wall,), terminal("tx", "TX", (0, 1, 1)), terminal("rx", "RX", (1, 1, 1)),
                      {"concrete": Material("concrete")})
        moved = scene.pose_at("w", 1.0).faces[0].vertices
        assert_allclose(moved - wall.faces[0].vertices, np.tile([-30 * KMH, 0.0, 0.0], (4, 1)))

    def test_terminals_follow_constant_acceleration(self):
        tx = terminal("tx", "TX", (0, 0, 0), (1, 0, 0), (0, 2, 0))
        assert_allclose(tx.state_at(2.0).position, [2.0, 4.0, 0.0])

    def test_swapped_terminals(self, wall_scene):
        swapped = wall_scene.swapped_terminals()
        assert swapped.transmitter.terminal_id == "rx"
        assert_allclose(swapped.transmitter.state.position, wall_scene.receiver.state.position)

    def test_static_scene(self, wall_scene, canyon):
        assert wall_scene.is_static
        assert not canyon.is_static


@pytest.mark.unit
class TestParser:
    """Tests for the scene text format."""

    def test_minimal(self):
        scene = parse_scene(MINIMAL)
        assert scene.name == "minimal"
        assert scene.object("wall").closed is False
        assert_allclose(scene.transmitter.state.velocity, [10.0, 0.0, 0.0])
        assert scene.transmitter.antenna.kind == "isotropic"
        assert scene.frequency == 3e9

    def test_units(self):
        text = MINIMAL.replace("terminal rx role=RX", "terminal rx role=RX frequency=2.4GHz power=0.5W")
        scene = parse_scene(text)
        assert scene.receiver.frequency == pytest.approx(2.4e9)
        assert scene.receiver.power == 0.5

    def test_comments_and_blank_lines(self):
        scene = parse_scene("# header\n\n" + MINIMAL.replace("GEOMETRY", "GEOMETRY  # section"))
        assert scene.name == "minimal"

    def test_syntax_error_has_position(self):
        text = MINIMAL.replace("height=10", "height=ten")
        with pytest.raises(SceneSyntaxError) as exc:
            parse_scene(text)
        assert exc.value.line == 5
        assert exc.value.column > 1
        assert str(exc.value).startswith("5:")

    def test_unknown_option(self):
        with pytest.raises(SceneSyntaxError, match="unknown option"):
            parse_scene(MINIMAL.replace("velocity=(36, 0, 0)kmh", "speed=10"))

    def test_unknown_unit(self):
        with pytest.raises(SceneSyntaxError, match="unknown unit"):
            parse_scene(MINIMAL.replace("height=10", "height=10ft"))

    def test_missing_end(self):
        with pytest.raises(SceneSyntaxError, match="end"):
            parse_scene(MINIMAL.replace("end\n", ""))

    def test_two_vertex_face_names_line(self):
        text = MINIMAL.replace(
            "  wall from=(-50, 0, 0) to=(50, 0, 0) height=10 facing=(0, 1, 0)",
            "  face (0, 0, 0) (1, 0, 0)",
        )
        with pytest.raises(SceneValidationError, match="line 5"):
            parse_scene(text)

    def test_missing_receiver(self):
        text = "\n".join(line for line in MINIMAL.splitlines() if "role=RX" not in line)
        with pytest.raises(SceneValidationError, match="one TX and one RX"):
            parse_scene(text)

    def test_duplicate_objects(self):
        block = "object wall open material=concrete\n  wall from=(0, 5, 0) to=(1, 5, 0) height=1 facing=(0, 1, 0)\nend\n"
        with pytest.raises(DuplicateIdError):
            parse_scene(MINIMAL.replace("DYNAMICS", block + "DYNAMICS"))

    def test_motion_for_unknown_object(self):
        with pytest.raises(SceneValidationError, match="unknown object"):
            parse_scene(MINIMAL + "motion ghost velocity=(1, 0, 0)\n")

    @pytest.mark.parametrize("builder", [single_wall, street_canyon, rotating_bus, intersection])
    def test_serialize_round_trip(self, builder):
        scene = builder()
        assert parse_scene(serialize_scene(scene)) == scene

    def test_save_and_load(self, tmp_path, canyon):
        path = tmp_path / "canyon.scn"
        assert save_scene(canyon, path) is True
        assert load_scene(path) == canyon

    def test_save_to_missing_directory(self, tmp_path, canyon):
        assert save_scene(canyon, tmp_path / "missing" / "canyon.scn") is False

    def test_load_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_scene(tmp_path / "nope.scn")


@pytest.mark.unit
class TestShippedScenarios:
    """The .scn files describe the same scenes as the builders."""

    def test_canyon(self, scenarios_dir):
        assert load_scene(scenarios_dir / "canyon.scn") == street_canyon()

    def test_intersection(self, scenarios_dir):
        scene = load_scene(scenarios_dir / "intersection.scn")
        reference = intersection()
        assert [o.object_id for o in scene.objects] == [o.object_id for o in reference.objects]
        assert scene.object("car").motion.angular_speed == pytest.approx(reference.object("car").motion.angular_speed)
        assert_allclose(scene.transmitter.state.velocity, reference.transmitter.state.velocity)

    def test_rotating_bus(self, scenarios_dir):
        scene = load_scene(scenarios_dir / "rotating_bus.scn")
        reference = rotating_bus()
        motion, expected = scene.object("bus").motion, reference.object("bus").motion
        assert motion.angular_speed == pytest.approx(math.pi / 6)
        assert_allclose(motion.rotation_center, expected.rotation_center)
        assert_allclose(motion.translation_velocity, expected.translation_velocity)
        for a, b in zip(scene.faces, reference.faces):
            assert_allclose(a.vertices, b.vertices)
