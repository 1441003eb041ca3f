# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Segment obstruction tests against the posed faces of a snapshot."""

import logging
from typing import Iterable, List, Optional

import numpy as np

from ..geometry.polygons import point_in_polygon, points_in_polygon
from ..scene.model import Face, SceneSnapshot
from ..scene.timeline import SceneTimeline

logger = logging.getLogger(__name__)

# Segment ends closer than this (m) to a plane are not counted as hits.
END_MARGIN = 1e-6


class Occluders:
    """Face planes of one snapshot packed for batched segment tests."""

    def __init__(self, faces: List[Face]):
        self.faces = faces
        self.ids = [f.face_id for f in faces]
        self._index = {fid: i for i, fid in enumerate(self.ids)}
        self.origins = np.array([f.origin for f in faces]).reshape(-1, 3)
        self.normals = np.array([f.normal for f in faces]).reshape(-1, 3)
        self.offsets = np.einsum("ij,ij->i", self.origins, self.normals)

    @classmethod
    def of(cls, snapshot: SceneSnapshot) -> "Occluders":
        cached = snapshot.cache.get("occluders")
        if cached is None:
            cached = snapshot.cache["occluders"] = cls(snapshot.face_list)
        return cached

    def first_hit(self, p: np.ndarray, q: np.ndarray, exclude: Iterable[str] = ()) -> Optional[str]:
        """Id of a face crossed by the open segment p-q, or None."""
        if not self.faces:
            return None
        d = q - p
        length = float(np.linalg.norm(d))
        if length == 0.0:
            return None
        denom = self.normals @ d
        num = self.offsets - self.normals @ p
        with np.errstate(divide="ignore", invalid="ignore"):
            t = num / denom
        margin = END_MARGIN / length
        candidates = np.nonzero((np.abs(denom) > 1e-15) & (t > margin) & (t < 1.0 - margin))[0]
        if candidates.size == 0:
            return None
        skip = {self._index[f] for f in exclude if f in self._index}
        for i in candidates[np.argsort(t[candidates])]:
            if i in skip:
                continue
            face = self.faces[i]
            hit = p + t[i] * d
            if point_in_polygon(face.in_plane(hit), face.outline):
                return face.face_id
        return None

    def obstructed(self, p: np.ndarray, q: np.ndarray, exclude: Iterable[str] = ()) -> bool:
        return self.first_hit(p, q, exclude) is not None


class OccluderSeries:
    """Face planes of a timeline, tested in each object's own t0 frame.

    A segment sampled at every step is carried into the body frame of each
    object, so the faces never have to be posed step by step.
    """

    def __init__(self, timeline: SceneTimeline):
        self.timeline = timeline
        self.groups = []
        for obj in timeline.scene.objects:
            faces = list(obj.faces)
            origins = np.array([f.origin for f in faces])
            normals = np.array([f.normal for f in faces])
            offsets = np.einsum("ij,ij->i", origins, normals)
            self.groups.append((timeline.motion(faces[0].face_id), faces, normals, offsets))

    @classmethod
    def of(cls, timeline: SceneTimeline) -> "OccluderSeries":
        cached = timeline.cache.get("occluders")
        if cached is None:
            cached = timeline.cache["occluders"] = cls(timeline)
        return cached

    def obstructed(self, p: np.ndarray, q: np.ndarray, exclude: Iterable[str] = (),
                   rows: Optional[np.ndarray] = None) -> np.ndarray:
        """(T,) mask of the steps where the open segment p-q crosses a face.

        p and q hold one endpoint per step; with `rows` only those steps are
        tested and the others come back False.
        """
        count = len(p)
        hit = np.zeros(count, dtype=bool)
        if rows is None:
            rows = np.ones(count, dtype=bool)
        if not rows.any():
            return hit
        skip = set(exclude)
        length = np.linalg.norm(q - p, axis=1)
        rows = rows & (length > 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            margin = END_MARGIN / length
            for motion, faces, normals, offsets in self.groups:
                a = motion.to_body(p)
                d = motion.to_body(q) - a
                denom = d @ normals.T
                t = (offsets - a @ normals.T) / denom
                crossing = (
                    rows[:, None]
                    & ~hit[:, None]
                    & (np.abs(denom) > 1e-15)
                    & (t > margin[:, None])
                    & (t < 1.0 - margin[:, None])
                )
                for j in np.flatnonzero(crossing.any(axis=0)):
                    face = faces[j]
                    if face.face_id in skip:
                        continue
                    k = np.flatnonzero(crossing[:, j] & ~hit)
                    if k.size == 0:
                        continue
                    points = a[k] + t[k, j, None] * d[k]
                    local = (points - face.origin) @ face.axes
                    hit[k[points_in_polygon(local[:, [0, 2]], face.outline)]] = True
        return hit


def segment_obstructed(snapshot: SceneSnapshot, p, q, exclude: Iterable[str] = ()) -> bool:
    """True if the segment p-q crosses the interior of any face not in `exclude`."""
    return Occluders.of(snapshot).obstructed(np.asarray(p, dtype=float), np.asarray(q, dtype=float), exclude)


def has_line_of_sight(scene, t: float) -> bool:
    """Cheap LoS existence check between the terminals at absolute time t."""
    snap = scene.snapshot(t)
    return not segment_obstructed(snap, snap.tx.position, snap.rx.position)
