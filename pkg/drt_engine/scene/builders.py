# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Programmatic construction of objects and the reference street scenes."""

import math
from typing import Dict, Iterable, Optional, Sequence

import numpy as np

from ..constants import DEG, KMH
from ..geometry.kinematics import KinematicState, RigidMotion
from ..geometry.vectors import Vec3, Z_AXIS, cross, dot, vec3
from .model import Antenna, Face, Material, Scene, SceneObject, Terminal

CONCRETE = Material("concrete", permittivity=5.0, conductivity=0.01, scattering=0.4)
METAL = Material("metal", perfect_conductor=True)


def rectangle_face(face_id: str, p0: Vec3, p1: Vec3, height: float, facing: Vec3, material: str) -> Face:
    """Vertical rectangle on the base segment p0-p1, normal turned towards `facing`."""
    p0, p1 = vec3(p0), vec3(p1)
    up = np.array([0.0, 0.0, height])
    verts = [p0, p0 + up, p1 + up, p1]
    n = cross(verts[1] - verts[0], verts[2] - verts[0])
    if dot(n, vec3(facing)) < 0.0:
        verts = verts[::-1]
    return Face(face_id, np.array(verts), material)


def wall_object(
    object_id: str,
    p0: Vec3,
    p1: Vec3,
    height: float,
    facing: Vec3,
    material: str = "concrete",
    motion: Optional[RigidMotion] = None,
    diffraction: str = "auto",
) -> SceneObject:
    """Single-sided wall slab (open object, one face)."""
    face = rectangle_face(f"{object_id}/f0", p0, p1, height, facing, material)
    return SceneObject(object_id, (face,), motion or RigidMotion.static(), closed=False, diffraction=diffraction)


def box_faces(object_id: str, center: Vec3, size: Vec3, material: str) -> tuple:
    """Six outward-facing faces of an axis-aligned box."""
    c = vec3(center)
    hx, hy, hz = 0.5 * vec3(size)
    corners = {
        (sx, sy, sz): c + np.array([sx * hx, sy * hy, sz * hz])
        for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)
    }
    # each quad wound counter-clockwise seen from outside
    quads = [
        [(-1, -1, -1), (-1, 1, -1), (1, 1, -1), (1, -1, -1)],
        [(-1, -1, 1), (1, -1, 1), (1, 1, 1), (-1, 1, 1)],
        [(-1, -1, -1), (1, -1, -1), (1, -1, 1), (-1, -1, 1)],
        [(-1, 1, -1), (-1, 1, 1), (1, 1, 1), (1, 1, -1)],
        [(-1, -1, -1), (-1, -1, 1), (-1, 1, 1), (-1, 1, -1)],
        [(1, -1, -1), (1, 1, -1), (1, 1, 1), (1, -1, 1)],
    ]
    return tuple(
        Face(f"{object_id}/f{i}", np.array([corners[k] for k in quad]), material)
        for i, quad in enumerate(quads)
    )


def box_object(
    object_id: str,
    center: Vec3,
    size: Vec3,
    material: str = "metal",
    motion: Optional[RigidMotion] = None,
    diffraction: str = "auto",
) -> SceneObject:
    return SceneObject(
        object_id,
        box_faces(object_id, center, size, material),
        motion or RigidMotion.static(),
        closed=True,
        diffraction=diffraction,
    )


def terminal(
    terminal_id: str,
    role: str,
    position: Vec3,
    velocity: Vec3 = (0.0, 0.0, 0.0),
    acceleration: Vec3 = (0.0, 0.0, 0.0),
    antenna: str = "dipole",
    frequency: float = 3e9,
    power: float = 1.0,
    t0: float = 0.0,
) -> Terminal:
    return Terminal(
        terminal_id,
        role,
        KinematicState(vec3(position), vec3(velocity), vec3(acceleration), t0),
        Antenna(antenna, Z_AXIS.copy()),
        frequency,
        power,
    )


def default_materials(extra: Iterable[Material] = ()) -> Dict[str, Material]:
    materials = {m.name: m for m in (CONCRETE, METAL)}
    materials.update({m.name: m for m in extra})
    return materials


def street_canyon(
    length: float = 1000.0,
    width: float = 30.0,
    height: float = 20.0,
    bus_center: Sequence[float] = (40.0, 0.0, 1.5),
    bus_size: Sequence[float] = (12.0, 2.5, 3.0),
    bus_speed_kmh: float = 30.0,
    tx_speed_kmh: float = 50.0,
    rx_speed_kmh: float = 36.0,
    antenna: str = "dipole",
    frequency: float = 3e9,
    power: float = 1.0,
    with_bus: bool = True,
) -> Scene:
    """Ideal street canyon: two side walls, two end walls and a moving metal bus.

    TX drives along +x in the south lane, RX along -x in the north lane and
    the bus along -x on the centre line. Wall material and height are
    assumptions (concrete, 20 m).
    """
    half_l, half_w = 0.5 * length, 0.5 * width
    objects = [
        wall_object("wall_s", (-half_l, -half_w, 0.0), (half_l, -half_w, 0.0), height, (0, 1, 0)),
        wall_object("wall_n", (-half_l, half_w, 0.0), (half_l, half_w, 0.0), height, (0, -1, 0)),
        wall_object("wall_w", (-half_l, -half_w, 0.0), (-half_l, half_w, 0.0), height, (1, 0, 0)),
        wall_object("wall_e", (half_l, -half_w, 0.0), (half_l, half_w, 0.0), height, (-1, 0, 0)),
    ]
    if with_bus:
        bus_motion = RigidMotion(
            translation_velocity=vec3(-bus_speed_kmh * KMH, 0.0, 0.0),
            rotation_center=vec3(bus_center),
        )
        objects.append(box_object("bus", bus_center, bus_size, "metal", bus_motion))
    tx = terminal("tx", "TX", (-30.0, -7.5, 1.75), (tx_speed_kmh * KMH, 0.0, 0.0),
                  antenna=antenna, frequency=frequency, power=power)
    rx = terminal("rx", "RX", (30.0, 7.5, 1.75), (-rx_speed_kmh * KMH, 0.0, 0.0),
                  antenna=antenna, frequency=frequency, power=power)
    return Scene(tuple(objects), tx, rx, default_materials(), 0.0, "street_canyon")


def rotating_bus(
    angular_speed: float = math.pi / 6.0,
    bus_speed_kmh: float = 30.0,
    tx_speed_kmh: float = 28.0,
    rx_speed_kmh: float = 30.0,
    antenna: str = "dipole",
    frequency: float = 3e9,
) -> Scene:
    """Bus turning at a junction while TX and RX drive past on its side.

    Both terminals sit on the same side of the bus (y < 0) so that the bus
    side face gives a single-bounce path; the bus rotates about a vertical
    axis through its rear axle. angular_speed=0 gives the straight case.
    """
    center = vec3(0.0, 4.0, 1.5)
    motion = RigidMotion(
        translation_velocity=vec3(-bus_speed_kmh * KMH, 0.0, 0.0),
        rotation_center=vec3(5.0, 4.0, 0.0),
        rotation_axis=Z_AXIS.copy(),
        angular_speed=angular_speed,
    )
    bus = box_object("bus", center, (12.0, 2.5, 3.0), "metal", motion)
    tx = terminal("tx", "TX", (1.0, -3.0, 1.75), (tx_speed_kmh * KMH, 0.0, 0.0), antenna=antenna, frequency=frequency)
    rx = terminal("rx", "RX", (-1.0, -9.0, 1.75), (rx_speed_kmh * KMH, 0.0, 0.0), antenna=antenna, frequency=frequency)
    return Scene((bus,), tx, rx, default_materials(), 0.0, "rotating_bus")


def intersection(frequency: float = 3e9) -> Scene:
    """Four corner buildings around a crossroads with a car turning left."""
    blocks = []
    for i, (sx, sy) in enumerate(((-1, -1), (1, -1), (-1, 1), (1, 1))):
        blocks.append(box_object(
            f"block{i}", (sx * 35.0, sy * 35.0, 10.0), (50.0, 50.0, 20.0), "concrete",
        ))
    car_motion = RigidMotion(
        translation_velocity=vec3(0.0, 20.0 * KMH, 0.0),
        rotation_center=vec3(-2.0, -15.0, 0.0),
        angular_speed=15.0 * DEG,
    )
    car = box_object("car", (-2.0, -15.0, 0.75), (4.5, 1.8, 1.5), "metal", car_motion)
    tx = terminal("tx", "TX", (-40.0, -5.0, 1.5), (30.0 * KMH, 0.0, 0.0), frequency=frequency)
    rx = terminal("rx", "RX", (5.0, 40.0, 1.5), (0.0, -20.0 * KMH, 0.0), frequency=frequency)
    return Scene(tuple(blocks) + (car,), tx, rx, default_materials(), 0.0, "intersection")


def single_wall(
    tx=(0.0, 2.0, 0.0),
    rx=(4.0, 4.0, 0.0),
    half_length: float = 1e4,
    material: str = "concrete",
    motion: Optional[RigidMotion] = None,
    antenna: str = "isotropic",
    diffraction: str = "off",
) -> Scene:
    """Large vertical wall in the plane y = 0 facing +y, edges not diffracting by default."""
    wall = wall_object(
        "wall", (-half_length, 0.0, -half_length), (half_length, 0.0, -half_length),
        2.0 * half_length, (0, 1, 0), material, motion, diffraction,
    )
    return Scene(
        (wall,),
        terminal("tx", "TX", tx, antenna=antenna),
        terminal("rx", "RX", rx, antenna=antenna),
        default_materials(),
    )
