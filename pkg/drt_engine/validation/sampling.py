# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Random cases for the oracles, as plain JSON-compatible dicts.

Every case can be rebuilt from its dict alone, so a failing case printed in
a report reproduces without the generator.
"""

from typing import Any, Dict

import numpy as np
from scipy.spatial.transform import Rotation

from ..geometry.kinematics import KinematicState, LocalFrame, RigidMotion
from ..geometry.vectors import Z_AXIS
from ..rt.paths import TraceConfig
from ..scene.builders import box_object, default_materials, terminal, wall_object
from ..scene.model import Scene

MAX_SPEED = 20.0
MAX_ACCELERATION = 5.0
MAX_ANGULAR_SPEED = 1.0
MAX_ANGULAR_ACCELERATION = 0.5


def rel_error(value, reference, floor: float = 1.0) -> float:
    """|value - reference| / max(|reference|, floor)."""
    value = np.asarray(value, dtype=float)
    reference = np.asarray(reference, dtype=float)
    return float(np.linalg.norm(value - reference) / max(float(np.linalg.norm(reference)), floor))


def random_unit(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def random_ball(rng: np.random.Generator, radius: float) -> np.ndarray:
    return random_unit(rng) * radius * rng.uniform() ** (1.0 / 3.0)


def random_rotation(rng: np.random.Generator) -> list:
    return Rotation.random(random_state=rng).as_matrix().tolist()


def random_motion(rng: np.random.Generator) -> Dict[str, Any]:
    """Static, translating or roto-translating body motion, equally likely."""
    kind = ("static", "translating", "rotating")[int(rng.integers(3))]
    motion: Dict[str, Any] = {"kind": kind}
    if kind == "static":
        return motion
    motion["translation_velocity"] = random_ball(rng, MAX_SPEED).tolist()
    motion["translation_acceleration"] = random_ball(rng, MAX_ACCELERATION).tolist()
    if kind == "rotating":
        motion["rotation_center"] = random_ball(rng, 20.0).tolist()
        motion["rotation_axis"] = random_unit(rng).tolist()
        motion["angular_speed"] = float(rng.uniform(-MAX_ANGULAR_SPEED, MAX_ANGULAR_SPEED))
        motion["angular_acceleration"] = float(rng.uniform(-MAX_ANGULAR_ACCELERATION, MAX_ANGULAR_ACCELERATION))
    return motion


def motion_from(d: Dict[str, Any]) -> RigidMotion:
    if d.get("kind", "static") == "static":
        return RigidMotion.static()
    return RigidMotion(
        translation_velocity=np.array(d["translation_velocity"]),
        translation_acceleration=np.array(d["translation_acceleration"]),
        rotation_center=np.array(d.get("rotation_center", (0.0, 0.0, 0.0))),
        rotation_axis=np.array(d.get("rotation_axis", Z_AXIS)),
        angular_speed=d.get("angular_speed", 0.0),
        angular_acceleration=d.get("angular_acceleration", 0.0),
    )


def random_terminal_motion(rng: np.random.Generator) -> Dict[str, Any]:
    return {
        "velocity": random_ball(rng, MAX_SPEED).tolist(),
        "acceleration": random_ball(rng, MAX_ACCELERATION).tolist(),
    }


def random_state(rng: np.random.Generator, radius: float = 50.0) -> Dict[str, Any]:
    d = random_terminal_motion(rng)
    d["position"] = random_ball(rng, radius).tolist()
    return d


def state_from(d: Dict[str, Any], t: float = 0.0) -> KinematicState:
    return KinematicState(np.array(d["position"]), np.array(d["velocity"]), np.array(d["acceleration"]), t)


def random_frame(rng: np.random.Generator) -> Dict[str, Any]:
    return {
        "origin": random_ball(rng, 20.0).tolist(),
        "orientation": random_rotation(rng),
        "motion": random_motion(rng),
    }


def frame_at(d: Dict[str, Any], dt: float) -> LocalFrame:
    return LocalFrame.attached(np.array(d["origin"]), np.array(d["orientation"]), motion_from(d["motion"]), dt)


def local_terminal(rng: np.random.Generator, frame: Dict[str, Any], local_position: np.ndarray) -> Dict[str, Any]:
    """Terminal given in frame coordinates at t0, stored in global coordinates."""
    d = random_terminal_motion(rng)
    d["position"] = frame_at(frame, 0.0).to_global(local_position).tolist()
    return d


# Scenes for the channel oracles: a static concrete wall and a moving metal box.

ORACLE_TRACE = TraceConfig(
    max_reflections=2,
    enable_diffraction=True,
    enable_scattering=True,
    combine_interactions=True,
    tile_size=5.0,
)


def random_scene(rng: np.random.Generator) -> Dict[str, Any]:
    size = [float(rng.uniform(4.0, 10.0)), float(rng.uniform(2.0, 3.0)), float(rng.uniform(2.0, 3.0))]
    center = [float(rng.uniform(-10.0, 10.0)), float(rng.uniform(8.0, 14.0)), 0.5 * size[2]]
    box_motion: Dict[str, Any] = {
        "kind": "rotating",
        "translation_velocity": [float(rng.uniform(-15.0, 15.0)), float(rng.uniform(-3.0, 3.0)), 0.0],
        "translation_acceleration": [float(rng.uniform(-2.0, 2.0)), 0.0, 0.0],
        "rotation_center": list(center),
        "rotation_axis": [0.0, 0.0, 1.0],
        "angular_speed": float(rng.uniform(-0.5, 0.5)) if rng.uniform() < 0.5 else 0.0,
        "angular_acceleration": 0.0,
    }

    def position(y_lo: float, y_hi: float) -> list:
        return [float(rng.uniform(-25.0, 25.0)), float(rng.uniform(y_lo, y_hi)), float(rng.uniform(1.0, 2.5))]

    tx = {"position": position(1.0, 5.0), **random_terminal_motion(rng)}
    rx = {"position": position(17.0, 25.0), **random_terminal_motion(rng)}
    for t in (tx, rx):
        t["velocity"][2] = 0.0
        t["acceleration"][2] = 0.0
    return {"box_center": center, "box_size": size, "box_motion": box_motion, "tx": tx, "rx": rx}


def scene_from(d: Dict[str, Any]) -> Scene:
    wall = wall_object("wall", (-30.0, 0.0, 0.0), (30.0, 0.0, 0.0), 10.0, (0, 1, 0), diffraction="off")
    box = box_object("box", d["box_center"], d["box_size"], "metal", motion_from(d["box_motion"]))
    tx = terminal("tx", "TX", d["tx"]["position"], d["tx"]["velocity"], d["tx"]["acceleration"], antenna="isotropic")
    rx = terminal("rx", "RX", d["rx"]["position"], d["rx"]["velocity"], d["rx"]["acceleration"], antenna="isotropic")
    return Scene((wall, box), tx, rx, default_materials(), 0.0, "oracle")
