# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""The scene sampled on a grid of instants.

A SceneTimeline is to a DRT segment what a SceneSnapshot is to one trace:
terminal states, object motions and face or edge frames are evaluated once
for every step and shared by everything that runs over the segment.
"""

import logging
from typing import Dict, Sequence

import numpy as np

from ..geometry.series import FrameSeries, MotionSeries, StateSeries
from ..geometry.vectors import Vec3
from .model import Scene, SceneSnapshot

logger = logging.getLogger(__name__)


class SceneTimeline:
    """Scene posed at absolute times `times` (T,)."""

    def __init__(self, scene: Scene, times: Sequence[float]):
        self.scene = scene
        self.times = np.asarray(times, dtype=float).reshape(-1)
        self.dt = self.times - scene.t0
        self._motions: Dict[str, MotionSeries] = {}
        self._frames: Dict[str, FrameSeries] = {}
        # derived per-timeline structures owned by other modules
        self.cache: Dict[str, object] = {}
        self.tx = self._terminal(scene.transmitter.state)
        self.rx = self._terminal(scene.receiver.state)

    @classmethod
    def of(cls, snapshot: SceneSnapshot) -> "SceneTimeline":
        """Single-instant timeline of a snapshot, cached on the snapshot."""
        cached = snapshot.cache.get("timeline")
        if cached is None:
            cached = snapshot.cache["timeline"] = cls(snapshot.scene, [snapshot.time])
        return cached

    def __len__(self) -> int:
        return len(self.times)

    def _terminal(self, state) -> StateSeries:
        return StateSeries.from_state(state, self.times - state.reference_time)

    def motion(self, primitive_id: str) -> MotionSeries:
        """Motion series of the object owning a face, edge or tile id."""
        obj = self.scene.owner(primitive_id)
        series = self._motions.get(obj.object_id)
        if series is None:
            series = self._motions[obj.object_id] = MotionSeries(obj.motion, self.dt)
        return series

    def face_frame(self, face_id: str) -> FrameSeries:
        frame = self._frames.get(face_id)
        if frame is None:
            face = self.scene.face(face_id)
            frame = self._frames[face_id] = FrameSeries.attached(face.origin, face.axes, self.motion(face_id))
        return frame

    def edge_frame(self, edge_id: str) -> FrameSeries:
        frame = self._frames.get(edge_id)
        if frame is None:
            edge = self.scene.edge(edge_id)
            frame = self._frames[edge_id] = FrameSeries.attached(edge.start, edge.axes, self.motion(edge_id))
        return frame

    def body_point_state(self, primitive_id: str, point0: Vec3) -> StateSeries:
        """Rows of the state of the body point that was at point0 at t0."""
        return self.motion(primitive_id).point_state(point0)
