# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Scene model: materials, polyhedral objects, terminals and their dynamics."""

from .builders import box_object, rotating_bus, single_wall, street_canyon, wall_object
from .model import (
    Antenna,
    Edge,
    Face,
    Material,
    ObjectPose,
    Scene,
    SceneObject,
    SceneSnapshot,
    Terminal,
    Tile,
)
from .parser import load_scene, parse_scene, save_scene, serialize_scene
from .timeline import SceneTimeline

__all__ = [
    "Antenna",
    "Edge",
    "Face",
    "Material",
    "ObjectPose",
    "Scene",
    "SceneObject",
    "SceneSnapshot",
    "SceneTimeline",
    "Terminal",
    "Tile",
    "box_object",
    "load_scene",
    "parse_scene",
    "rotating_bus",
    "save_scene",
    "serialize_scene",
    "single_wall",
    "street_canyon",
    "wall_object",
]
