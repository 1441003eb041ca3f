# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Prolong a traced path set in time without re-tracing.

Each path is re-solved at the new instant from its interaction sequence
alone: reflections are imaged from the transmitter side before a diffraction
or scattering vertex and from the receiver side after it, then back-tracked.
A GeometryError or a failed validation expires the path; it is never dropped
and no new path is ever created here.
"""

import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union, overload

import numpy as np

from ..constants import DEGENERACY_EPSILON
from ..errors import ConfigError, GeometryError
from ..geometry.kinematics import LocalFrame
from ..geometry.series import StateSeries
from ..rt.paths import InteractionKind, RayPath, SeriesValidation
from ..rt.tracer import validate_path, validate_series
from ..scene.model import Scene, SceneSnapshot
from ..scene.timeline import SceneTimeline
from .diffraction import diffract_series, diffraction_point_kinematics
from .reflection import backtrack_multibounce, backtrack_series, image_chain, image_series
from .scattering import scatter_point_kinematics

logger = logging.getLogger(__name__)

METHODS = ("exact", "taylor")


def _frames(snapshot: SceneSnapshot, ids: Sequence[str]) -> List[LocalFrame]:
    return [snapshot.face_frame(i) for i in ids]


def path_kinematics(path: RayPath, snapshot: SceneSnapshot) -> RayPath:
    """The path re-solved at snapshot.time with full vertex kinematics.

    Raises:
        GeometryError: a closed-form denominator vanished or the diffraction
            point left its edge segment
    """
    t = snapshot.time
    tx, rx = snapshot.tx, snapshot.rx
    inters = path.interactions
    pivot = next((i for i, x in enumerate(inters) if x.kind is not InteractionKind.REFLECTION), None)

    if pivot is None:
        states = backtrack_multibounce(_frames(snapshot, [x.primitive_id for x in inters]), tx, rx)
    else:
        before = _frames(snapshot, [x.primitive_id for x in inters[:pivot]])
        after = _frames(snapshot, [x.primitive_id for x in inters[pivot + 1:]])
        middle = inters[pivot]
        if middle.kind is InteractionKind.SCATTER:
            face_id = middle.primitive_id.rsplit("/", 1)[0]
            state = scatter_point_kinematics(
                middle.anchor, snapshot.motion_of(face_id), t, snapshot.scene.t0
            )
        else:
            source = image_chain(tx, before)[-1]
            receiver = image_chain(rx, after[::-1])[-1]
            edge_id = middle.primitive_id
            state = diffraction_point_kinematics(
                snapshot.scene.edge(edge_id), snapshot.motion_of(edge_id), source, receiver, t, snapshot.scene.t0
            ).state
        pivot_state = state.with_time(t)
        states = (
            backtrack_multibounce(before, tx, pivot_state)
            + [pivot_state]
            + backtrack_multibounce(after, pivot_state, rx)
        )

    interactions = tuple(x.with_state(s.with_time(t)) for x, s in zip(inters, states))
    return dataclasses.replace(path, interactions=interactions, tx=tx, rx=rx, time=t, kinematics=True)


def _taylor(path: RayPath, snapshot: SceneSnapshot) -> RayPath:
    dt = snapshot.time - path.time
    interactions = tuple(
        x.with_state(x.state.advanced(dt)) for x in path.interactions
    )
    return dataclasses.replace(
        path, interactions=interactions, tx=snapshot.tx, rx=snapshot.rx, time=snapshot.time, kinematics=True
    )


def extrapolate_path(path: RayPath, scene: Scene, snapshot: SceneSnapshot, method: str = "exact",
                     validate: bool = True, base_snapshot: Optional[SceneSnapshot] = None) -> RayPath:
    """One path moved to snapshot.time; failures come back as expired paths."""
    t = snapshot.time
    if path.expired:
        return dataclasses.replace(path, time=t)
    try:
        if method == "exact":
            moved = path_kinematics(path, snapshot)
        else:
            base = path if path.kinematics else path_kinematics(path, base_snapshot or scene.snapshot(path.time))
            moved = _taylor(base, snapshot)
    except GeometryError as exc:
        logger.warning(f"Path {path.path_id} expired at t={t:.6f} s: {exc}")
        return dataclasses.replace(path, time=t).expire(str(exc))
    if validate:
        check = validate_path(moved, scene, t, snapshot=snapshot, strict=(method == "exact"))
        if not check:
            logger.warning(f"Path {path.path_id} expired at t={t:.6f} s: {check.reason}")
            return moved.expire(check.reason)
    return moved


def extrapolate_paths(
    paths: Sequence[RayPath],
    scene: Scene,
    dt: float,
    validate: bool = True,
    method: str = "exact",
    threads: int = 1,
) -> List[RayPath]:
    """Paths traced at their own time, prolonged by dt seconds.

    The output keeps the input order. method="exact" re-solves every vertex
    in closed form at the new instant; method="taylor" advances each vertex
    by the constant-acceleration Taylor formula from its kinematics at the
    path's own time.
    """
    if method not in METHODS:
        raise ConfigError(f"unknown extrapolation method {method!r}, expected one of {METHODS}")
    if threads < 1:
        raise ConfigError("threads must be >= 1")
    snapshots: Dict[float, SceneSnapshot] = {}
    bases: Dict[float, SceneSnapshot] = {}

    def snapshot_at(cache: Dict[float, SceneSnapshot], t: float) -> SceneSnapshot:
        snap = cache.get(t)
        if snap is None:
            snap = cache[t] = scene.snapshot(t)
        return snap

    jobs = [(p, snapshot_at(snapshots, p.time + dt), snapshot_at(bases, p.time)) for p in paths]

    def run(job) -> RayPath:
        path, snap, base = job
        return extrapolate_path(path, scene, snap, method=method, validate=validate, base_snapshot=base)

    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run, jobs))
    return [run(job) for job in jobs]


def attach_kinematics(paths: Sequence[RayPath], scene: Scene, snapshot: Optional[SceneSnapshot] = None) -> List[RayPath]:
    """Fill vertex kinematics of freshly traced paths at their own time."""
    if not paths:
        return []
    snap = snapshot if snapshot is not None else scene.snapshot(paths[0].time)
    return [extrapolate_path(p, scene, snap, validate=False) for p in paths]


# -- whole segments -----------------------------------------------------------

_TIME_SLACK = 1e-9


def solve_series(path: RayPath, timeline: SceneTimeline) -> Tuple[List[StateSeries], SeriesValidation]:
    """path_kinematics at every step of a timeline.

    Returns the vertex states, TX first, and the steps where the closed form
    could not be evaluated, with the reason path_kinematics would raise.
    """
    result = SeriesValidation(len(timeline))
    tx, rx = timeline.tx, timeline.rx
    inters = path.interactions
    pivot = next((i for i, x in enumerate(inters) if x.kind is not InteractionKind.REFLECTION), None)
    frames = [timeline.face_frame(x.primitive_id) if x.kind is InteractionKind.REFLECTION else None for x in inters]

    if pivot is None:
        states, ok = backtrack_series(frames, tx, rx)
        result.fail(~ok, "terminal on the reflecting plane")
        return [tx] + states + [rx], result

    before, after = frames[:pivot], frames[pivot + 1:]
    middle = inters[pivot]
    if middle.kind is InteractionKind.SCATTER:
        state = timeline.body_point_state(middle.primitive_id, middle.anchor)
    else:
        source, receiver = tx, rx
        for frame in before:
            source = image_series(frame, source)
        for frame in reversed(after):
            receiver = image_series(frame, receiver)
        edge = timeline.scene.edge(middle.primitive_id)
        state, z, ok = diffract_series(timeline.edge_frame(edge.edge_id), source, receiver)
        result.fail(~ok, "terminal on the edge axis")
        tol = max(DEGENERACY_EPSILON, 1e-9 * edge.length)
        result.fail((z < -tol) | (z > edge.length + tol), f"point left edge segment {edge.edge_id}")
    head, ok_head = backtrack_series(before, tx, state)
    tail, ok_tail = backtrack_series(after, state, rx)
    result.fail(~(ok_head & ok_tail), "terminal on the reflecting plane")
    return [tx] + head + [state] + tail + [rx], result


def _taylor_series(base: RayPath, timeline: SceneTimeline) -> List[StateSeries]:
    dt = timeline.times - base.time
    return [timeline.tx] + [StateSeries.from_state(x.state, dt) for x in base.interactions] + [timeline.rx]


@dataclass(eq=False)
class PathTrack:
    """One path followed over the steps of a timeline.

    `live` is False from the first step where the path failed onwards; an
    expired path never comes back within its track.
    """

    base: RayPath
    times: np.ndarray
    states: List[StateSeries]
    live: np.ndarray
    reason: Optional[str] = None

    @property
    def positions(self) -> np.ndarray:
        """Vertex positions (V, T, 3), TX first."""
        return np.stack([s.position for s in self.states])

    @property
    def expiry(self) -> Optional[int]:
        """Index of the first dead step, or None."""
        dead = np.flatnonzero(~self.live)
        return int(dead[0]) if dead.size else None

    def path_at(self, k: int) -> RayPath:
        t = float(self.times[k])
        vertices = [s.at(k, t) for s in self.states]
        interactions = tuple(x.with_state(v) for x, v in zip(self.base.interactions, vertices[1:-1]))
        path = dataclasses.replace(
            self.base, interactions=interactions, tx=vertices[0], rx=vertices[-1], time=t, kinematics=True,
        )
        if not self.live[k]:
            return path.expire(self.reason or "expired")
        return path


def track_path(path: RayPath, timeline: SceneTimeline, method: str = "exact", validate: bool = True) -> PathTrack:
    """extrapolate_path at every step of a timeline, expiry carried forward."""
    count = len(timeline)
    if path.expired:
        states = [StateSeries.still(np.broadcast_to(v.position, (count, 3))) for v in path.vertices]
        return PathTrack(path, timeline.times, states, np.zeros(count, dtype=bool), path.expiry_reason)
    if method == "exact":
        states, check = solve_series(path, timeline)
    else:
        base = path if path.kinematics else path_kinematics(path, timeline.scene.snapshot(path.time))
        states, check = _taylor_series(base, timeline), SeriesValidation(count)
    if validate and check.any_valid:
        positions = np.stack([s.position for s in states])
        check.merge(validate_series(path, positions, timeline, strict=(method == "exact")))
    valid = check.valid | (np.abs(timeline.times - path.time) <= _TIME_SLACK)
    live = np.logical_and.accumulate(valid)
    track = PathTrack(path, timeline.times, states, live)
    first = track.expiry
    if first is not None:
        track.reason = check.reasons[first] or "expired"
        logger.warning(f"Path {path.path_id} expired at t={timeline.times[first]:.6f} s: {track.reason}")
    return track


def track_paths(paths: Sequence[RayPath], timeline: SceneTimeline, method: str = "exact", validate: bool = True,
                threads: int = 1) -> List[PathTrack]:
    """Every path of a trace followed over a timeline, input order kept."""
    if method not in METHODS:
        raise ConfigError(f"unknown extrapolation method {method!r}, expected one of {METHODS}")

    def run(path: RayPath) -> PathTrack:
        return track_path(path, timeline, method=method, validate=validate)

    if threads > 1 and len(paths) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run, paths))
    return [run(p) for p in paths]


class TrackedPaths(Sequence[RayPath]):
    """The paths of a set of tracks at one step, built on access."""

    def __init__(self, tracks: Sequence[PathTrack], k: int):
        self.tracks = tracks
        self.k = k

    def __len__(self) -> int:
        return len(self.tracks)

    @overload
    def __getitem__(self, index: int) -> RayPath: ...

    @overload
    def __getitem__(self, index: slice) -> List[RayPath]: ...

    def __getitem__(self, index: Union[int, slice]):
        if isinstance(index, slice):
            return [t.path_at(self.k) for t in self.tracks[index]]
        return self.tracks[index].path_at(self.k)

    def __iter__(self) -> Iterator[RayPath]:
        return (t.path_at(self.k) for t in self.tracks)
