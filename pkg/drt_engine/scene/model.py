# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""The dynamic environment database.

A Scene holds two parts: the geometry (polyhedral objects, as they are at the
reference time t0) and the dynamics (one RigidMotion per object plus the
kinematic state of each terminal). Everything is immutable once built;
time evaluation goes through Scene.pose_at and Scene.snapshot.
"""

import dataclasses
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from ..constants import GEOMETRIC_EPSILON
from ..errors import DuplicateIdError, SceneValidationError, UnknownObjectError
from ..geometry.kinematics import ArrayFieldsEq, KinematicState, LocalFrame, RigidMotion
from ..geometry.polygons import (
    clip_polygon,
    is_simple,
    point_in_polygon,
    polygon_area,
    polygon_centroid,
)
from ..geometry.vectors import Vec3, Z_AXIS, as_finite_vec3, cross, dot, mirror, norm, normalized, unit

logger = logging.getLogger(__name__)

ANTENNA_KINDS = ("isotropic", "dipole")
DIFFRACTION_MODES = ("auto", "on", "off")


@dataclass(frozen=True)
class Material:
    """Homogeneous surface material.

    `scattering` is the Effective Roughness coefficient S; 0 disables diffuse
    scattering from surfaces made of this material.
    """

    name: str
    permittivity: float = 1.0
    conductivity: float = 0.0
    scattering: float = 0.0
    perfect_conductor: bool = False

    def __post_init__(self):
        where = f"material {self.name}"
        if not (math.isfinite(self.permittivity) and self.permittivity >= 1.0):
            raise SceneValidationError(f"permittivity must be >= 1, got {self.permittivity}", where)
        if not (math.isfinite(self.conductivity) and self.conductivity >= 0.0):
            raise SceneValidationError(f"conductivity must be >= 0, got {self.conductivity}", where)
        if not 0.0 <= self.scattering <= 1.0:
            raise SceneValidationError(f"scattering coefficient must be in [0, 1], got {self.scattering}", where)


@dataclass(frozen=True, eq=False)
class Antenna(ArrayFieldsEq):
    kind: str = "isotropic"
    axis: Vec3 = field(default_factory=lambda: Z_AXIS.copy())

    def __post_init__(self):
        if self.kind not in ANTENNA_KINDS:
            raise SceneValidationError(f"unknown antenna kind {self.kind!r}", "antenna")
        a = as_finite_vec3(self.axis, "antenna axis")
        if norm(a) == 0.0:
            raise SceneValidationError("antenna axis must be non-zero", "antenna")
        object.__setattr__(self, "axis", normalized(a))


@dataclass(frozen=True, eq=False)
class Terminal(ArrayFieldsEq):
    """Transmitter or receiver with constant-acceleration kinematics."""

    terminal_id: str
    role: str
    state: KinematicState
    antenna: Antenna = field(default_factory=Antenna)
    frequency: float = 3e9
    power: float = 1.0

    def __post_init__(self):
        where = f"terminal {self.terminal_id}"
        if self.role not in ("TX", "RX"):
            raise SceneValidationError(f"role must be TX or RX, got {self.role!r}", where)
        if not (math.isfinite(self.frequency) and self.frequency > 0.0):
            raise SceneValidationError(f"carrier frequency must be > 0, got {self.frequency}", where)
        if not (math.isfinite(self.power) and self.power > 0.0):
            raise SceneValidationError(f"transmit power must be > 0, got {self.power}", where)

    def state_at(self, t: float) -> KinematicState:
        return self.state.advanced(t - self.state.reference_time)


@dataclass(frozen=True, eq=False)
class Face(ArrayFieldsEq):
    """Planar polygon with its outward normal given by the vertex winding.

    The face frame has its origin on vertex 0, x along the first side, y along
    the normal, and z = x cross y; `outline` holds the vertices in (x, z).
    """

    face_id: str
    vertices: np.ndarray
    material: str
    normal: Vec3 = field(init=False)
    axes: np.ndarray = field(init=False)
    outline: np.ndarray = field(init=False)
    area: float = field(init=False)

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3 or len(v) < 3:
            raise SceneValidationError(
                f"a face needs at least 3 vertices, got {len(v) if v.ndim == 2 else v.size}", self.face_id
            )
        if not np.all(np.isfinite(v)):
            raise SceneValidationError("non-finite vertex coordinates", self.face_id)
        object.__setattr__(self, "vertices", v)
        # Newell's normal; its length is twice the polygon area
        nvec = np.cross(v, np.roll(v, -1, axis=0)).sum(axis=0)
        if norm(nvec) <= GEOMETRIC_EPSILON:
            raise SceneValidationError("degenerate face with zero area", self.face_id)
        n = nvec / norm(nvec)
        extent = float(np.max(np.ptp(v, axis=0)))
        off_plane = np.abs((v - v[0]) @ n)
        if float(off_plane.max()) > GEOMETRIC_EPSILON * max(1.0, extent):
            raise SceneValidationError(
                f"vertices are not coplanar (max deviation {off_plane.max():.3e} m)", self.face_id
            )
        first = v[1] - v[0]
        u = unit(first - dot(first, n) * n)
        axes = np.column_stack((u, n, cross(u, n)))
        local = (v - v[0]) @ axes
        outline = local[:, [0, 2]]
        if not is_simple(outline):
            raise SceneValidationError("polygon is self-intersecting", self.face_id)
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "outline", outline)
        object.__setattr__(self, "area", abs(polygon_area(outline)))

    @property
    def object_id(self) -> str:
        return self.face_id.split("/", 1)[0]

    @property
    def origin(self) -> Vec3:
        return self.vertices[0]

    @property
    def centroid(self) -> Vec3:
        c = polygon_centroid(self.outline)
        return self.origin + self.axes @ np.array([c[0], 0.0, c[1]])

    def signed_distance(self, point: Vec3) -> float:
        return dot(np.asarray(point, dtype=float) - self.origin, self.normal)

    def in_plane(self, point: Vec3) -> np.ndarray:
        """(x, z) face-frame coordinates of the projection of point."""
        local = self.axes.T @ (np.asarray(point, dtype=float) - self.origin)
        return local[[0, 2]]

    def contains(self, point: Vec3, eps: float = GEOMETRIC_EPSILON) -> bool:
        """True if point lies on the plane and inside the polygon (to eps)."""
        if abs(self.signed_distance(point)) > eps * max(1.0, norm(np.asarray(point, dtype=float))):
            return False
        return point_in_polygon(self.in_plane(point), self.outline, eps)

    def mirror(self, point: Vec3) -> Vec3:
        return mirror(np.asarray(point, dtype=float), self.origin, self.normal)

    def frame(self, motion: RigidMotion, dt: float) -> LocalFrame:
        """Face frame of this (t0) face carried to t0 + dt."""
        return LocalFrame.attached(self.origin, self.axes, motion, dt)

    def moved(self, motion: RigidMotion, dt: float) -> "Face":
        if motion.is_static:
            return self
        verts = np.array([motion.transform_point(p, dt) for p in self.vertices])
        return dataclasses.replace(self, vertices=verts)


@dataclass(frozen=True, eq=False)
class Edge(ArrayFieldsEq):
    """Straight wedge edge shared by two faces, or a free boundary of an open face.

    The 0-face is `face_a`. `tangent` lies in face A, perpendicular to the
    edge and pointing into the face; the edge direction is tangent x normal_a,
    so the exterior angle phi is measured from face A towards its normal.
    A free boundary is a half-plane (wedge_angle 0, n = 2).
    """

    edge_id: str
    start: Vec3
    end: Vec3
    face_a: str
    face_b: Optional[str]
    tangent: Vec3
    normal_a: Vec3
    wedge_angle: float
    diffracting: bool = True

    def __post_init__(self):
        for name in ("start", "end", "tangent", "normal_a"):
            object.__setattr__(self, name, as_finite_vec3(getattr(self, name), name))

    @property
    def direction(self) -> Vec3:
        return unit(self.end - self.start)

    @property
    def length(self) -> float:
        return norm(self.end - self.start)

    @property
    def n(self) -> float:
        """Exterior wedge factor, exterior angle = n * pi."""
        return (2.0 * math.pi - self.wedge_angle) / math.pi

    @property
    def axes(self) -> np.ndarray:
        """Edge frame: x along the 0-face tangent, y along its normal, z along the edge."""
        return np.column_stack((self.tangent, self.normal_a, self.direction))

    @property
    def object_id(self) -> str:
        return self.edge_id.split("/", 1)[0]

    def frame(self, motion: RigidMotion, dt: float) -> LocalFrame:
        return LocalFrame.attached(self.start, self.axes, motion, dt)

    def angle_of(self, point: Vec3) -> float:
        """Azimuth of point around the edge, measured from face A, in [0, 2 pi)."""
        d = np.asarray(point, dtype=float) - self.start
        phi = math.atan2(dot(d, self.normal_a), dot(d, self.tangent))
        return phi + 2.0 * math.pi if phi < 0.0 else phi

    def parameter(self, point: Vec3) -> float:
        return dot(np.asarray(point, dtype=float) - self.start, self.direction)

    def contains(self, point: Vec3, eps: float = GEOMETRIC_EPSILON) -> bool:
        p = np.asarray(point, dtype=float)
        s = self.parameter(p)
        if s < -eps or s > self.length + eps:
            return False
        off = p - self.start - s * self.direction
        return norm(off) <= eps * max(1.0, norm(p))

    def moved(self, motion: RigidMotion, dt: float) -> "Edge":
        if motion.is_static:
            return self
        return dataclasses.replace(
            self,
            start=motion.transform_point(self.start, dt),
            end=motion.transform_point(self.end, dt),
            tangent=motion.transform_vector(self.tangent, dt),
            normal_a=motion.transform_vector(self.normal_a, dt),
        )


@dataclass(frozen=True, eq=False)
class Tile(ArrayFieldsEq):
    """Diffuse-scattering tile; the virtual scattering source sits at its centroid."""

    tile_id: str
    face_id: str
    centroid: Vec3
    area: float
    normal: Vec3

    def moved(self, motion: RigidMotion, dt: float) -> "Tile":
        if motion.is_static:
            return self
        return dataclasses.replace(
            self,
            centroid=motion.transform_point(self.centroid, dt),
            normal=motion.transform_vector(self.normal, dt),
        )


def _edge_key(p: Vec3, q: Vec3) -> Tuple:
    a = tuple(np.round(p, 9))
    b = tuple(np.round(q, 9))
    return (a, b) if a <= b else (b, a)


def derive_edges(object_id: str, faces: Tuple[Face, ...], closed: bool, mode: str = "auto") -> Tuple[Edge, ...]:
    """Build the edge list from face adjacency.

    Shared sides become wedges; coplanar neighbours produce no edge. Free
    sides are half-planes, allowed only on open objects.
    """
    sides: Dict[Tuple, List[Tuple[Face, Vec3, Vec3]]] = {}
    order: List[Tuple] = []
    for face in faces:
        v = face.vertices
        for i in range(len(v)):
            p, q = v[i], v[(i + 1) % len(v)]
            key = _edge_key(p, q)
            if key not in sides:
                sides[key] = []
                order.append(key)
            sides[key].append((face, p, q))

    edges: List[Edge] = []
    for key in order:
        owners = sides[key]
        if len(owners) > 2:
            raise SceneValidationError(f"side {key} is shared by {len(owners)} faces", object_id)
        face_a, p, q = owners[0]
        d_a = unit(q - p)
        t_a = cross(face_a.normal, d_a)
        if len(owners) == 1:
            if closed:
                raise SceneValidationError(
                    f"object is declared closed but side {p.tolist()}-{q.tolist()} of {face_a.face_id} is free",
                    object_id,
                )
            face_b_id, alpha = None, 0.0
        else:
            face_b, pb, qb = owners[1]
            t_b = cross(face_b.normal, unit(qb - pb))
            c = max(-1.0, min(1.0, dot(t_a, t_b)))
            if c < -1.0 + 1e-12:
                continue
            alpha = math.acos(c) if dot(t_b, face_a.normal) < 0.0 else 2.0 * math.pi - math.acos(c)
            face_b_id = face_b.face_id
        if mode == "on":
            diffracting = True
        elif mode == "off":
            diffracting = False
        else:
            diffracting = alpha < math.pi
        edges.append(Edge(
            edge_id=f"{object_id}/e{len(edges)}",
            start=p.copy(),
            end=q.copy(),
            face_a=face_a.face_id,
            face_b=face_b_id,
            tangent=t_a,
            normal_a=face_a.normal.copy(),
            wedge_angle=alpha,
            diffracting=diffracting,
        ))
    return tuple(edges)


def tessellate(face: Face, tile_size: float) -> Tuple[Tile, ...]:
    """Split a face into tiles no larger than tile_size x tile_size."""
    lo = face.outline.min(axis=0)
    hi = face.outline.max(axis=0)
    span = hi - lo
    counts = [max(1, math.ceil(s / tile_size - 1e-9)) for s in span]
    step = span / np.array(counts)
    tiles: List[Tile] = []
    for i in range(counts[0]):
        for j in range(counts[1]):
            cell_lo = (lo[0] + i * step[0], lo[1] + j * step[1])
            cell_hi = (lo[0] + (i + 1) * step[0], lo[1] + (j + 1) * step[1])
            piece = clip_polygon(face.outline, cell_lo, cell_hi)
            if len(piece) < 3:
                continue
            area = abs(polygon_area(piece))
            if area <= 1e-12:
                continue
            c = polygon_centroid(piece)
            tiles.append(Tile(
                tile_id=f"{face.face_id}/t{len(tiles)}",
                face_id=face.face_id,
                centroid=face.origin + face.axes @ np.array([c[0], 0.0, c[1]]),
                area=area,
                normal=face.normal.copy(),
            ))
    return tuple(tiles)


@dataclass(frozen=True, eq=False)
class SceneObject(ArrayFieldsEq):
    """Rigid polyhedron (closed) or wall set (open) sharing one motion."""

    object_id: str
    faces: Tuple[Face, ...]
    motion: RigidMotion = field(default_factory=RigidMotion.static)
    closed: bool = True
    diffraction: str = "auto"
    edges: Tuple[Edge, ...] = field(init=False)

    def __post_init__(self):
        if "/" in self.object_id or not self.object_id:
            raise SceneValidationError("object ids must be non-empty and must not contain '/'", self.object_id)
        if not self.faces:
            raise SceneValidationError("object has no faces", self.object_id)
        if self.diffraction not in DIFFRACTION_MODES:
            raise SceneValidationError(f"diffraction must be one of {DIFFRACTION_MODES}", self.object_id)
        object.__setattr__(self, "faces", tuple(self.faces))
        ids = [f.face_id for f in self.faces]
        if len(set(ids)) != len(ids):
            raise DuplicateIdError("duplicate face id", self.object_id)
        object.__setattr__(self, "edges", derive_edges(self.object_id, self.faces, self.closed, self.diffraction))
        object.__setattr__(self, "_tiles", {})

    def tiles(self, tile_size: float) -> Tuple[Tile, ...]:
        """Tiles of every face at t0, cached per tile size."""
        cached = self._tiles.get(tile_size)
        if cached is None:
            cached = tuple(t for face in self.faces for t in tessellate(face, tile_size))
            self._tiles[tile_size] = cached
        return cached


class ObjectPose(NamedTuple):
    object_id: str
    time: float
    faces: Tuple[Face, ...]
    edges: Tuple[Edge, ...]


@dataclass(frozen=True, eq=False)
class Scene(ArrayFieldsEq):
    objects: Tuple[SceneObject, ...]
    transmitter: Terminal
    receiver: Terminal
    materials: Dict[str, Material] = field(default_factory=dict)
    t0: float = 0.0
    name: str = "scene"

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        index: Dict[str, SceneObject] = {}
        for obj in self.objects:
            if obj.object_id in index:
                raise DuplicateIdError("duplicate object id", obj.object_id)
            index[obj.object_id] = obj
            for face in obj.faces:
                if face.material not in self.materials:
                    raise SceneValidationError(f"unknown material {face.material!r}", face.face_id)
        if self.transmitter.role != "TX" or self.receiver.role != "RX":
            raise SceneValidationError("scene needs exactly one TX and one RX", "terminals")
        if self.transmitter.terminal_id == self.receiver.terminal_id:
            raise DuplicateIdError("TX and RX share an id", self.transmitter.terminal_id)
        if self.transmitter.terminal_id in index or self.receiver.terminal_id in index:
            raise DuplicateIdError("terminal id clashes with an object id", "terminals")
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_faces", {f.face_id: f for o in self.objects for f in o.faces})
        object.__setattr__(self, "_edges", {e.edge_id: e for o in self.objects for e in o.edges})

    def object(self, object_id: str) -> SceneObject:
        try:
            return self._index[object_id]
        except KeyError:
            raise UnknownObjectError(f"unknown object id {object_id!r}") from None

    def owner(self, primitive_id: str) -> SceneObject:
        """Object owning a face, edge or tile id."""
        return self.object(primitive_id.split("/", 1)[0])

    def face(self, face_id: str) -> Face:
        try:
            return self._faces[face_id]
        except KeyError:
            raise UnknownObjectError(f"unknown face id {face_id!r}") from None

    def edge(self, edge_id: str) -> Edge:
        try:
            return self._edges[edge_id]
        except KeyError:
            raise UnknownObjectError(f"unknown edge id {edge_id!r}") from None

    def material(self, face: Face) -> Material:
        return self.materials[face.material]

    @property
    def faces(self) -> List[Face]:
        return list(self._faces.values())

    @property
    def edges(self) -> List[Edge]:
        return list(self._edges.values())

    @property
    def frequency(self) -> float:
        return self.transmitter.frequency

    @property
    def is_static(self) -> bool:
        terminals_still = all(
            not np.any(term.state.velocity) and not np.any(term.state.acceleration)
            for term in (self.transmitter, self.receiver)
        )
        return terminals_still and all(o.motion.is_static for o in self.objects)

    def pose_at(self, object_id: str, t: float) -> ObjectPose:
        """Faces and edges of one object at absolute time t."""
        obj = self.object(object_id)
        dt = t - self.t0
        return ObjectPose(
            object_id=object_id,
            time=t,
            faces=tuple(f.moved(obj.motion, dt) for f in obj.faces),
            edges=tuple(e.moved(obj.motion, dt) for e in obj.edges),
        )

    def snapshot(self, t: float) -> "SceneSnapshot":
        return SceneSnapshot(self, t)

    def swapped_terminals(self) -> "Scene":
        """Same scene with TX and RX exchanged (power and carrier kept)."""
        tx, rx = self.transmitter, self.receiver
        new_tx = dataclasses.replace(rx, role="TX", frequency=tx.frequency, power=tx.power)
        new_rx = dataclasses.replace(tx, role="RX", frequency=tx.frequency, power=tx.power)
        return dataclasses.replace(self, transmitter=new_tx, receiver=new_rx)


class SceneSnapshot:
    """Scene frozen at absolute time t.

    Posed faces, edges, tiles and local frames are computed on first use and
    cached, so one snapshot can be shared by the tracer, the validator and the
    field solver.
    """

    def __init__(self, scene: Scene, t: float):
        self.scene = scene
        self.time = float(t)
        self.dt = self.time - scene.t0
        self._frames: Dict[str, LocalFrame] = {}
        self._tiles: Dict[float, Tuple[Tile, ...]] = {}
        # derived per-snapshot structures owned by other modules
        self.cache: Dict[str, object] = {}

    @cached_property
    def tx(self) -> KinematicState:
        return self.scene.transmitter.state_at(self.time)

    @cached_property
    def rx(self) -> KinematicState:
        return self.scene.receiver.state_at(self.time)

    @cached_property
    def faces(self) -> Dict[str, Face]:
        return {
            f.face_id: f.moved(obj.motion, self.dt)
            for obj in self.scene.objects
            for f in obj.faces
        }

    @cached_property
    def edges(self) -> Dict[str, Edge]:
        return {
            e.edge_id: e.moved(obj.motion, self.dt)
            for obj in self.scene.objects
            for e in obj.edges
        }

    @cached_property
    def face_list(self) -> List[Face]:
        return list(self.faces.values())

    @cached_property
    def diffracting_edges(self) -> List[Edge]:
        return [e for e in self.edges.values() if e.diffracting]

    def tiles(self, tile_size: float) -> Tuple[Tile, ...]:
        cached = self._tiles.get(tile_size)
        if cached is None:
            cached = tuple(
                t.moved(obj.motion, self.dt) for obj in self.scene.objects for t in obj.tiles(tile_size)
            )
            self._tiles[tile_size] = cached
        return cached

    def motion_of(self, primitive_id: str) -> RigidMotion:
        return self.scene.owner(primitive_id).motion

    def face_frame(self, face_id: str) -> LocalFrame:
        frame = self._frames.get(face_id)
        if frame is None:
            frame = self.scene.face(face_id).frame(self.motion_of(face_id), self.dt)
            self._frames[face_id] = frame
        return frame

    def edge_frame(self, edge_id: str) -> LocalFrame:
        frame = self._frames.get(edge_id)
        if frame is None:
            frame = self.scene.edge(edge_id).frame(self.motion_of(edge_id), self.dt)
            self._frames[edge_id] = frame
        return frame

    def body_point_state(self, primitive_id: str, point0: Vec3) -> KinematicState:
        """State at this instant of the body point that was at point0 at t0."""
        state = self.motion_of(primitive_id).point_state(point0, self.dt)
        return state.with_time(self.time)
