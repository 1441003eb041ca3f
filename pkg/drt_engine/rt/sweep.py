# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Path existence over a whole timeline without re-tracing.

Every interaction sequence the tracer could produce is enumerated once from
the scene topology. Each candidate is then tested at all steps of a
timeline at once, with the same acceptance rules as trace_snapshot: image
checks, polygon and edge containment, wedge exterior, front side and
obstruction. The result tells at which steps each sequence is a valid path,
which is how a DRT segment spots paths that are born between two traces.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..geometry.polygons import points_in_polygon
from ..geometry.vectors import Vec3, dots
from ..scene.model import Scene
from ..scene.timeline import SceneTimeline
from .paths import InteractionKind, PathKey, TraceConfig
from .tracer import front_of, in_wedge_exterior_series, primitive_faces
from .visibility import OccluderSeries

logger = logging.getLogger(__name__)

R, D, S = InteractionKind.REFLECTION, InteractionKind.DIFFRACTION, InteractionKind.SCATTER


@dataclass(frozen=True, eq=False)
class Candidate:
    """Reflections on `before`, an optional edge or tile pivot, then reflections on `after`."""

    before: Tuple[str, ...] = ()
    pivot: Optional[Tuple[InteractionKind, str]] = None
    after: Tuple[str, ...] = ()
    anchor: Optional[Vec3] = None

    @property
    def key(self) -> PathKey:
        steps = [(R.value, f) for f in self.before]
        if self.pivot is not None:
            steps.append((self.pivot[0].value, self.pivot[1]))
        steps.extend((R.value, f) for f in self.after)
        return tuple(steps)


def _sequences(face_ids: Sequence[str], depth: int) -> List[Tuple[str, ...]]:
    """Face sequences of length 1..depth with distinct consecutive faces."""
    out: List[Tuple[str, ...]] = []
    level = [(f,) for f in face_ids]
    while level and len(level[0]) <= depth:
        out.extend(level)
        level = [seq + (f,) for seq in level for f in face_ids if f != seq[-1]]
    return out


def enumerate_candidates(scene: Scene, config: TraceConfig) -> List[Candidate]:
    """Every interaction sequence trace_snapshot can return for this scene and config."""
    face_ids = [f.face_id for f in scene.faces]
    combine = config.combine_interactions and config.max_reflections >= 1
    out = [Candidate()]
    if config.max_reflections >= 1:
        out.extend(Candidate(before=seq) for seq in _sequences(face_ids, config.max_reflections))
    if config.enable_diffraction:
        for edge in scene.edges:
            if not edge.diffracting:
                continue
            pivot = (D, edge.edge_id)
            out.append(Candidate(pivot=pivot))
            if combine:
                for f in face_ids:
                    out.extend((Candidate((f,), pivot), Candidate((), pivot, (f,))))
    if config.enable_scattering:
        for obj in scene.objects:
            for tile in obj.tiles(config.tile_size):
                if scene.material(scene.face(tile.face_id)).scattering <= 0.0:
                    continue
                pivot = (S, tile.tile_id)
                out.append(Candidate(pivot=pivot, anchor=tile.centroid))
                if combine:
                    for f in face_ids:
                        if f != tile.face_id:
                            out.extend((
                                Candidate((f,), pivot, anchor=tile.centroid),
                                Candidate((), pivot, (f,), anchor=tile.centroid),
                            ))
    return out


class _Sweep:
    def __init__(self, timeline: SceneTimeline, config: TraceConfig):
        self.timeline = timeline
        self.scene = timeline.scene
        self.eps = config.epsilon
        self.occluders = OccluderSeries.of(timeline)
        self.tx = timeline.tx.position
        self.rx = timeline.rx.position

    def _sd(self, face_id: str, points: np.ndarray) -> np.ndarray:
        return front_of(self.timeline.face_frame(face_id), points)

    def _mirror(self, face_id: str, points: np.ndarray, sd: np.ndarray) -> np.ndarray:
        return points - 2.0 * sd[:, None] * self.timeline.face_frame(face_id).axis(1)

    def _chain(self, faces: Sequence[str], source: np.ndarray, receiver: np.ndarray,
               alive: np.ndarray) -> Optional[List[np.ndarray]]:
        """Rows of reflection_chain; clears `alive` where it fails, None once nothing is left."""
        eps = self.eps
        images = [source]
        for f in faces[:-1]:
            sd = self._sd(f, images[-1])
            alive &= sd > eps
            if not alive.any():
                return None
            images.append(self._mirror(f, images[-1], sd))
        points: List[np.ndarray] = [None] * len(faces)
        current = receiver
        for i in range(len(faces) - 1, -1, -1):
            f = faces[i]
            ds = self._sd(f, images[i])
            dr = self._sd(f, current)
            alive &= (ds > eps) & (dr > eps)
            if not alive.any():
                return None
            image = self._mirror(f, images[i], ds)
            q = image + (current - image) * (ds / (ds + dr))[:, None]
            rows = np.flatnonzero(alive)
            local = self.timeline.face_frame(f).to_local(q)[rows]
            alive[rows] = points_in_polygon(local[:, [0, 2]], self.scene.face(f).outline, eps)
            if not alive.any():
                return None
            points[i] = q
            current = q
        return points

    def _accept(self, vertices: List[np.ndarray], steps: List[Tuple[InteractionKind, str]],
                alive: np.ndarray) -> np.ndarray:
        ends: List[Optional[Tuple[InteractionKind, str]]] = [None] + steps + [None]
        for k in range(len(vertices) - 1):
            exclude = set()
            for end in (ends[k], ends[k + 1]):
                if end is not None:
                    exclude |= primitive_faces(self.scene, *end)
            alive &= ~self.occluders.obstructed(vertices[k], vertices[k + 1], exclude, rows=alive)
            if not alive.any():
                break
        return alive

    def evaluate(self, candidate: Candidate) -> np.ndarray:
        """(T,) mask of the steps at which the candidate is a valid path."""
        alive = np.ones(len(self.timeline), dtype=bool)
        with np.errstate(invalid="ignore", divide="ignore"):
            if candidate.pivot is None:
                return self._reflections(candidate.before, alive)
            if candidate.pivot[0] is D:
                return self._diffraction(candidate, alive)
            return self._scatter(candidate, alive)

    def _reflections(self, faces: Tuple[str, ...], alive: np.ndarray) -> np.ndarray:
        if not faces:
            return self._accept([self.tx, self.rx], [], alive)
        points = self._chain(faces, self.tx, self.rx, alive)
        if points is None:
            return alive
        return self._accept([self.tx] + points + [self.rx], [(R, f) for f in faces], alive)

    def _diffraction(self, c: Candidate, alive: np.ndarray) -> np.ndarray:
        eps = self.eps
        source, receiver = self.tx, self.rx
        for f in c.before:
            sd = self._sd(f, source)
            alive &= sd > eps
            source = self._mirror(f, source, sd)
        for f in reversed(c.after):
            sd = self._sd(f, receiver)
            alive &= sd > eps
            receiver = self._mirror(f, receiver, sd)
        edge = self.scene.edge(c.pivot[1])
        frame = self.timeline.edge_frame(edge.edge_id)
        ls, lr = frame.to_local(source), frame.to_local(receiver)
        d_s = np.hypot(ls[:, 0], ls[:, 1])
        d_r = np.hypot(lr[:, 0], lr[:, 1])
        alive &= (d_s >= eps) & (d_r >= eps)
        z = lr[:, 2] + d_r / (d_s + d_r) * (ls[:, 2] - lr[:, 2])
        alive &= (z >= -eps) & (z <= edge.length + eps)
        alive &= in_wedge_exterior_series(frame, edge, source) & in_wedge_exterior_series(frame, edge, receiver)
        if not alive.any():
            return alive
        q_d = frame.origin + z[:, None] * frame.axis(2)
        head = self._chain(c.before, self.tx, q_d, alive) if c.before else []
        if head is None:
            return alive
        tail = self._chain(c.after, q_d, self.rx, alive) if c.after else []
        if tail is None:
            return alive
        steps = [(R, f) for f in c.before] + [c.pivot] + [(R, f) for f in c.after]
        return self._accept([self.tx] + head + [q_d] + tail + [self.rx], steps, alive)

    def _scatter(self, c: Candidate, alive: np.ndarray) -> np.ndarray:
        eps = self.eps
        face_id = c.pivot[1].rsplit("/", 1)[0]
        centre = self.timeline.motion(face_id).transform_points(c.anchor)
        head = self._chain(c.before, self.tx, centre, alive) if c.before else []
        if head is None:
            return alive
        tail = self._chain(c.after, centre, self.rx, alive) if c.after else []
        if tail is None:
            return alive
        incoming = head[-1] if head else self.tx
        outgoing = tail[0] if tail else self.rx
        normal = self.timeline.face_frame(face_id).axis(1)
        alive &= (dots(incoming - centre, normal) > eps) & (dots(outgoing - centre, normal) > eps)
        if not alive.any():
            return alive
        steps = [(R, f) for f in c.before] + [c.pivot] + [(R, f) for f in c.after]
        return self._accept([self.tx] + head + [centre] + tail + [self.rx], steps, alive)


def sweep_paths(timeline: SceneTimeline, config: Optional[TraceConfig] = None,
                candidates: Optional[Sequence[Candidate]] = None, threads: int = 1) -> Dict[PathKey, np.ndarray]:
    """Steps (T,) at which each candidate is a valid path, for candidates valid at some step.

    At any single step the keys with a True entry are exactly the keys
    trace_snapshot returns at that instant.
    """
    config = config or TraceConfig()
    if candidates is None:
        candidates = enumerate_candidates(timeline.scene, config)
    sweep = _Sweep(timeline, config)
    # pose every frame up front so worker threads only read the caches
    for face in timeline.scene.faces:
        timeline.face_frame(face.face_id)
    for edge in timeline.scene.edges:
        timeline.edge_frame(edge.edge_id)
    if threads > 1 and len(candidates) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            masks = list(pool.map(sweep.evaluate, candidates))
    else:
        masks = [sweep.evaluate(c) for c in candidates]
    found = {c.key: m for c, m in zip(candidates, masks) if m.any()}
    logger.debug(f"Swept {len(candidates)} candidates over {len(timeline)} steps: {len(found)} exist")
    return found
