# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Image-method ray tracer for one frozen scene snapshot.

Reflection sequences are enumerated depth-first over the image tree of the
transmitter and back-tracked from the receiver. Diffraction and scattering
paths reuse the same single-reflection chains on either side of the edge or
tile. Every candidate is checked for polygon containment and obstruction
before it is accepted.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np

from ..constants import GEOMETRIC_EPSILON
from ..geometry.polygons import point_in_polygon, points_in_polygon
from ..geometry.series import FrameSeries
from ..geometry.vectors import Vec3, dot, dots, norm, norms
from ..scene.model import Edge, Face, Scene, SceneSnapshot, Tile
from ..scene.timeline import SceneTimeline
from .paths import (
    Interaction,
    InteractionKind,
    PathValidation,
    RayPath,
    SeriesValidation,
    TraceConfig,
    static_state,
)
from .visibility import OccluderSeries, Occluders

logger = logging.getLogger(__name__)

R, D, S = InteractionKind.REFLECTION, InteractionKind.DIFFRACTION, InteractionKind.SCATTER


def mirror_point(point: Vec3, face: Face) -> Vec3:
    """Image of point across the plane of face."""
    return face.mirror(point)


def specular_point(face: Face, source: Vec3, receiver: Vec3) -> Vec3:
    """Point on the face plane where source reflects towards receiver.

    Both points must be strictly in front of the face.
    """
    ds = face.signed_distance(source)
    dr = face.signed_distance(receiver)
    image = face.mirror(source)
    return image + (receiver - image) * (ds / (ds + dr))


def keller_point(edge: Edge, source: Vec3, receiver: Vec3, eps: float = GEOMETRIC_EPSILON) -> Optional[Tuple[Vec3, float]]:
    """Diffraction point on the infinite edge line and its parameter, or None if degenerate."""
    e = edge.direction
    rs = source - edge.start
    rr = receiver - edge.start
    z_s, z_r = dot(rs, e), dot(rr, e)
    d_s = norm(rs - z_s * e)
    d_r = norm(rr - z_r * e)
    if d_s < eps or d_r < eps:
        return None
    z = z_r + d_r / (d_s + d_r) * (z_s - z_r)
    return edge.start + z * e, z


def in_wedge_exterior(edge: Edge, point: Vec3) -> bool:
    phi = edge.angle_of(point)
    return 0.0 < phi < edge.n * np.pi


def reflection_chain(faces: Sequence[Face], source: Vec3, receiver: Vec3, eps: float) -> Optional[List[Vec3]]:
    """Reflection points for the face sequence, source side first, or None.

    Fails when a virtual source or receiver is not strictly in front of the
    next face or a point falls outside its polygon.
    """
    images = [source]
    for face in faces[:-1]:
        if face.signed_distance(images[-1]) <= eps:
            return None
        images.append(face.mirror(images[-1]))
    points: List[Vec3] = [None] * len(faces)
    current = receiver
    for i in range(len(faces) - 1, -1, -1):
        face = faces[i]
        if face.signed_distance(images[i]) <= eps or face.signed_distance(current) <= eps:
            return None
        q = specular_point(face, images[i], current)
        if not point_in_polygon(face.in_plane(q), face.outline, eps):
            return None
        points[i] = q
        current = q
    return points


def endpoint_faces(scene: Scene, interaction: Optional[Interaction]) -> Set[str]:
    """Faces an interaction point lies on, excluded from obstruction tests of its segments."""
    if interaction is None:
        return set()
    return primitive_faces(scene, interaction.kind, interaction.primitive_id)


def primitive_faces(scene: Scene, kind: InteractionKind, primitive_id: str) -> Set[str]:
    if kind is R:
        return {primitive_id}
    if kind is D:
        edge = scene.edge(primitive_id)
        return {edge.face_a} | ({edge.face_b} if edge.face_b else set())
    return {primitive_id.rsplit("/", 1)[0]}


class _Tracer:
    def __init__(self, snapshot: SceneSnapshot, config: TraceConfig):
        self.snapshot = snapshot
        self.scene = snapshot.scene
        self.config = config
        self.eps = config.epsilon
        self.occluders = Occluders.of(snapshot)
        self.faces = snapshot.face_list
        self.tx = snapshot.tx.position
        self.rx = snapshot.rx.position

    # -- assembly ---------------------------------------------------------

    def _interaction(self, kind: InteractionKind, primitive_id: str, point: Vec3, tile: Optional[Tile] = None,
                     anchor: Optional[Vec3] = None) -> Interaction:
        state = static_state(point, self.snapshot.time)
        if tile is not None:
            return Interaction(kind, primitive_id, state, anchor=anchor, area=tile.area)
        return Interaction(kind, primitive_id, state)

    def _accept(self, interactions: List[Interaction]) -> Optional[RayPath]:
        points = [self.tx] + [i.point for i in interactions] + [self.rx]
        ends: List[Optional[Interaction]] = [None] + interactions + [None]
        for k in range(len(points) - 1):
            exclude = endpoint_faces(self.scene, ends[k]) | endpoint_faces(self.scene, ends[k + 1])
            if self.occluders.obstructed(points[k], points[k + 1], exclude):
                return None
        return RayPath(tuple(interactions), self.snapshot.tx, self.snapshot.rx, self.snapshot.time)

    def _reflections(self, faces: Sequence[Face], points: Sequence[Vec3]) -> List[Interaction]:
        return [self._interaction(R, f.face_id, q) for f, q in zip(faces, points)]

    # -- branches ---------------------------------------------------------

    def line_of_sight(self) -> List[RayPath]:
        path = self._accept([])
        return [path] if path is not None else []

    def reflections_from(self, first: Face) -> List[RayPath]:
        """Every reflection sequence starting on `first`, up to max_reflections."""
        found: List[RayPath] = []
        if self.config.max_reflections < 1 or first.signed_distance(self.tx) <= self.eps:
            return found
        stack: List[Tuple[Tuple[Face, ...], Vec3]] = [((first,), first.mirror(self.tx))]
        while stack:
            seq, image = stack.pop()
            points = reflection_chain(seq, self.tx, self.rx, self.eps)
            if points is not None:
                path = self._accept(self._reflections(seq, points))
                if path is not None:
                    found.append(path)
            if len(seq) < self.config.max_reflections:
                for face in reversed(self.faces):
                    if face is seq[-1] or face.signed_distance(image) <= self.eps:
                        continue
                    stack.append((seq + (face,), face.mirror(image)))
        return found

    def diffractions_at(self, edge: Edge) -> List[RayPath]:
        found: List[RayPath] = []
        path = self._diffraction((), edge, ())
        if path is not None:
            found.append(path)
        if self.config.combine_interactions and self.config.max_reflections >= 1:
            for face in self.faces:
                for before, after in (((face,), ()), ((), (face,))):
                    path = self._diffraction(before, edge, after)
                    if path is not None:
                        found.append(path)
        return found

    def _diffraction(self, before: Tuple[Face, ...], edge: Edge, after: Tuple[Face, ...]) -> Optional[RayPath]:
        eps = self.eps
        source, receiver = self.tx, self.rx
        for face in before:
            if face.signed_distance(source) <= eps:
                return None
            source = face.mirror(source)
        for face in reversed(after):
            if face.signed_distance(receiver) <= eps:
                return None
            receiver = face.mirror(receiver)
        hit = keller_point(edge, source, receiver, eps)
        if hit is None:
            return None
        q_d, z = hit
        if z < -eps or z > edge.length + eps:
            return None
        if not (in_wedge_exterior(edge, source) and in_wedge_exterior(edge, receiver)):
            return None
        head = reflection_chain(before, self.tx, q_d, eps) if before else []
        tail = reflection_chain(after, q_d, self.rx, eps) if after else []
        if head is None or tail is None:
            return None
        interactions = (
            self._reflections(before, head)
            + [self._interaction(D, edge.edge_id, q_d)]
            + self._reflections(after, tail)
        )
        return self._accept(interactions)

    def scattering_at(self, tile0: Tile, tile: Tile) -> List[RayPath]:
        found: List[RayPath] = []
        combos: List[Tuple[Tuple[Face, ...], Tuple[Face, ...]]] = [((), ())]
        if self.config.combine_interactions and self.config.max_reflections >= 1:
            for face in self.faces:
                if face.face_id != tile.face_id:
                    combos.extend((((face,), ()), ((), (face,))))
        for before, after in combos:
            path = self._scatter(before, tile0, tile, after)
            if path is not None:
                found.append(path)
        return found

    def _scatter(self, before: Tuple[Face, ...], tile0: Tile, tile: Tile, after: Tuple[Face, ...]) -> Optional[RayPath]:
        eps = self.eps
        c = tile.centroid
        head = reflection_chain(before, self.tx, c, eps) if before else []
        if head is None:
            return None
        tail = reflection_chain(after, c, self.rx, eps) if after else []
        if tail is None:
            return None
        incoming = head[-1] if head else self.tx
        outgoing = tail[0] if tail else self.rx
        if dot(incoming - c, tile.normal) <= eps or dot(outgoing - c, tile.normal) <= eps:
            return None
        interactions = (
            self._reflections(before, head)
            + [self._interaction(S, tile.tile_id, c, tile=tile, anchor=tile0.centroid)]
            + self._reflections(after, tail)
        )
        return self._accept(interactions)

    # -- driver -----------------------------------------------------------

    def branches(self) -> List[Callable[[], List[RayPath]]]:
        tasks: List[Callable[[], List[RayPath]]] = [self.line_of_sight]
        tasks.extend(lambda f=f: self.reflections_from(f) for f in self.faces)
        if self.config.enable_diffraction:
            tasks.extend(lambda e=e: self.diffractions_at(e) for e in self.snapshot.diffracting_edges)
        if self.config.enable_scattering:
            scene = self.snapshot.scene
            size = self.config.tile_size
            t0_tiles = [t for obj in scene.objects for t in obj.tiles(size)]
            for tile0, tile in zip(t0_tiles, self.snapshot.tiles(size)):
                material = scene.material(scene.face(tile.face_id))
                if material.scattering > 0.0:
                    tasks.append(lambda a=tile0, b=tile: self.scattering_at(a, b))
        return tasks

    def run(self) -> List[RayPath]:
        tasks = self.branches()
        if self.config.threads > 1:
            with ThreadPoolExecutor(max_workers=self.config.threads) as pool:
                results = list(pool.map(lambda task: task(), tasks))
        else:
            results = [task() for task in tasks]
        paths = [p for group in results for p in group]
        paths.sort(key=RayPath.sort_key)
        return paths


def trace_snapshot(scene: Scene, t: float, config: Optional[TraceConfig] = None,
                   snapshot: Optional[SceneSnapshot] = None) -> List[RayPath]:
    """All valid, unobstructed paths at absolute time t, sorted by (delay, path id).

    Paths carry positions only; vertex kinematics are filled in by the
    extrapolator.
    """
    config = config or TraceConfig()
    snap = snapshot if snapshot is not None else scene.snapshot(t)
    paths = _Tracer(snap, config).run()
    logger.debug(f"Traced {len(paths)} paths at t={snap.time:.6f} s")
    return paths


def _check_reflection(face: Face, prev: Vec3, point: Vec3, nxt: Vec3, strict: bool, eps: float) -> Optional[str]:
    inside = face.contains(point, eps) if strict else point_in_polygon(face.in_plane(point), face.outline, eps)
    if not inside:
        return "point left face polygon"
    if face.signed_distance(prev) <= 0.0 or face.signed_distance(nxt) <= 0.0:
        return "reflection on back side"
    return None


def _check_diffraction(edge: Edge, prev: Vec3, point: Vec3, nxt: Vec3, strict: bool, eps: float) -> Optional[str]:
    if strict:
        on_edge = edge.contains(point, eps)
    else:
        z = edge.parameter(point)
        on_edge = -eps <= z <= edge.length + eps
    if not on_edge:
        return "point left edge segment"
    if not (in_wedge_exterior(edge, prev) and in_wedge_exterior(edge, nxt)):
        return "diffraction outside wedge exterior"
    return None


def _check_scatter(snapshot: SceneSnapshot, interaction: Interaction, prev: Vec3, nxt: Vec3,
                   strict: bool, eps: float) -> Optional[str]:
    face_id = interaction.primitive_id.rsplit("/", 1)[0]
    face = snapshot.faces[face_id]
    if strict and interaction.anchor is not None:
        expected = snapshot.body_point_state(face_id, interaction.anchor).position
        if norm(expected - interaction.point) > eps * max(1.0, norm(expected)):
            return "scatter point left tile"
    if face.signed_distance(prev) <= 0.0 or face.signed_distance(nxt) <= 0.0:
        return "scattering on back side"
    return None


def validate_path(path: RayPath, scene: Scene, t: float, snapshot: Optional[SceneSnapshot] = None,
                  strict: bool = True, eps: float = GEOMETRIC_EPSILON) -> PathValidation:
    """Check that every interaction point still sits on its primitive and no segment is blocked.

    With strict=False the points are projected onto their primitives before
    the containment tests (used for Taylor-extrapolated geometry).
    """
    if path.expired:
        return PathValidation(False, path.expiry_reason)
    snap = snapshot if snapshot is not None else scene.snapshot(t)
    points = path.points
    for i, inter in enumerate(path.interactions, start=1):
        prev, point, nxt = points[i - 1], points[i], points[i + 1]
        if inter.kind is R:
            reason = _check_reflection(snap.faces[inter.primitive_id], prev, point, nxt, strict, eps)
        elif inter.kind is D:
            reason = _check_diffraction(snap.edges[inter.primitive_id], prev, point, nxt, strict, eps)
        else:
            reason = _check_scatter(snap, inter, prev, nxt, strict, eps)
        if reason is not None:
            return PathValidation(False, reason)
    occluders = Occluders.of(snap)
    ends: List[Optional[Interaction]] = [None] + list(path.interactions) + [None]
    for k in range(len(points) - 1):
        exclude = endpoint_faces(scene, ends[k]) | endpoint_faces(scene, ends[k + 1])
        if occluders.obstructed(points[k], points[k + 1], exclude):
            return PathValidation(False, "segment obstructed")
    return PathValidation(True)


def validate_paths(paths: Iterable[RayPath], scene: Scene, t: float, **kwargs) -> List[PathValidation]:
    snap = scene.snapshot(t)
    return [validate_path(p, scene, t, snapshot=snap, **kwargs) for p in paths]


def wedge_angles(frame: FrameSeries, points: np.ndarray) -> np.ndarray:
    """Rows of Edge.angle_of for points (T, 3) around the edge of `frame`."""
    local = frame.to_local(points)
    phi = np.arctan2(local[:, 1], local[:, 0])
    return np.where(phi < 0.0, phi + 2.0 * np.pi, phi)


def in_wedge_exterior_series(frame: FrameSeries, edge: Edge, points: np.ndarray) -> np.ndarray:
    phi = wedge_angles(frame, points)
    return (phi > 0.0) & (phi < edge.n * np.pi)


def front_of(frame: FrameSeries, points: np.ndarray) -> np.ndarray:
    """Signed distance of points (T, 3) from the face plane of `frame`."""
    return dots(points - frame.origin, frame.axis(1))


def validate_series(path: RayPath, positions: np.ndarray, timeline: SceneTimeline, strict: bool = True,
                    eps: float = GEOMETRIC_EPSILON) -> SeriesValidation:
    """validate_path at every instant of a timeline.

    `positions` holds the vertex positions (V, T, 3), TX first. Steps that
    already failed skip the obstruction tests.
    """
    result = SeriesValidation(len(timeline))
    if path.expired:
        result.fail(np.ones(len(timeline), dtype=bool), path.expiry_reason or "expired")
        return result
    scene = timeline.scene
    with np.errstate(invalid="ignore", divide="ignore"):
        for i, inter in enumerate(path.interactions, start=1):
            prev, point, nxt = positions[i - 1], positions[i], positions[i + 1]
            if inter.kind is R:
                face = scene.face(inter.primitive_id)
                frame = timeline.face_frame(face.face_id)
                local = frame.to_local(point)
                inside = points_in_polygon(local[:, [0, 2]], face.outline, eps)
                if strict:
                    inside &= np.abs(local[:, 1]) <= eps * np.maximum(1.0, norms(point))
                result.fail(~inside, "point left face polygon")
                front = (front_of(frame, prev) > 0.0) & (front_of(frame, nxt) > 0.0)
                result.fail(~front, "reflection on back side")
            elif inter.kind is D:
                edge = scene.edge(inter.primitive_id)
                frame = timeline.edge_frame(edge.edge_id)
                local = frame.to_local(point)
                on_edge = (local[:, 2] >= -eps) & (local[:, 2] <= edge.length + eps)
                if strict:
                    on_edge &= np.hypot(local[:, 0], local[:, 1]) <= eps * np.maximum(1.0, norms(point))
                result.fail(~on_edge, "point left edge segment")
                exterior = in_wedge_exterior_series(frame, edge, prev) & in_wedge_exterior_series(frame, edge, nxt)
                result.fail(~exterior, "diffraction outside wedge exterior")
            else:
                face_id = inter.primitive_id.rsplit("/", 1)[0]
                frame = timeline.face_frame(face_id)
                if strict and inter.anchor is not None:
                    expected = timeline.motion(face_id).transform_points(inter.anchor)
                    on_tile = norms(expected - point) <= eps * np.maximum(1.0, norms(expected))
                    result.fail(~on_tile, "scatter point left tile")
                front = (front_of(frame, prev) > 0.0) & (front_of(frame, nxt) > 0.0)
                result.fail(~front, "scattering on back side")
            if not result.any_valid:
                return result
        occluders = OccluderSeries.of(timeline)
        ends: List[Optional[Interaction]] = [None] + list(path.interactions) + [None]
        for k in range(len(positions) - 1):
            exclude = endpoint_faces(scene, ends[k]) | endpoint_faces(scene, ends[k + 1])
            blocked = occluders.obstructed(positions[k], positions[k + 1], exclude, rows=result.valid)
            result.fail(blocked, "segment obstructed")
    return result
