# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Time-stepped channel simulation: DRT segments and the snapshot reference.

A DRT run traces the scene once at the start of every multipath lifetime
segment and follows that path set over every time step of the segment in
one batched pass: vertex kinematics, validity, field and Doppler are
evaluated for all steps at once. A sweep of every interaction sequence
over the same steps finds the paths born inside the segment. The
reference run traces every step from scratch.
"""

import dataclasses
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from ..drt.extrapolation import METHODS, PathTrack, TrackedPaths, attach_kinematics, track_paths
from ..em.field import field_series, path_field
from ..errors import ConfigError
from ..rt.paths import PathKey, RayPath, TraceConfig, path_id_of
from ..rt.sweep import Candidate, enumerate_candidates, sweep_paths
from ..rt.tracer import trace_snapshot
from ..scene.model import Scene, SceneSnapshot
from ..scene.timeline import SceneTimeline
from .doppler import doppler_series, doppler_shift
from .samples import ChannelSample, ChannelSnapshot
from .schedule import AUTO_BIRTH, AUTO_EXPIRY, TcSchedule

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

_TIME_SLACK = 1e-9

# Steps per batched window of an automatic schedule: the first window after a
# refresh, and the cap the window doubles up to while nothing happens.
AUTO_WINDOW = 8
AUTO_WINDOW_MAX = 64

BIRTH = "birth"
EXPIRY = "expiry"


@dataclass(frozen=True)
class TimingReport:
    """Wall-clock seconds per phase; speedup = reference / drt_total."""

    parse: float = 0.0
    trace: float = 0.0
    extrapolate: float = 0.0
    sweep: float = 0.0
    field: float = 0.0
    drt_total: float = 0.0
    reference: Optional[float] = None
    segments: int = 1

    @property
    def speedup(self) -> Optional[float]:
        if self.reference is None or self.drt_total <= 0.0:
            return None
        return self.reference / self.drt_total

    def as_dict(self) -> Dict[str, object]:
        return {
            "parse_s": self.parse,
            "trace_s": self.trace,
            "extrapolate_s": self.extrapolate,
            "sweep_s": self.sweep,
            "field_s": self.field,
            "drt_total_s": self.drt_total,
            "reference_s": self.reference,
            "speedup": self.speedup,
            "segments": self.segments,
        }


@dataclass(frozen=True)
class PathEvent:
    """A path appearing (birth) or disappearing (expiry) between two traces."""

    time: float
    path_id: str
    kind: str
    reason: Optional[str] = None


@dataclass(frozen=True)
class DRTRun:
    snapshots: Tuple[ChannelSnapshot, ...]
    schedule: TcSchedule
    timing: TimingReport
    reference: Tuple[ChannelSnapshot, ...] = ()
    events: Tuple[PathEvent, ...] = ()

    @property
    def refreshes(self) -> int:
        return len(self.schedule.instants) - 1

    @property
    def times(self) -> List[float]:
        return [s.time for s in self.snapshots]

    @property
    def births(self) -> int:
        """Paths that appeared inside a segment without a trace to pick them up."""
        return sum(1 for e in self.events if e.kind == BIRTH)

    @property
    def expiries(self) -> int:
        return sum(1 for e in self.events if e.kind == EXPIRY)


class _Clock:
    """Accumulates wall-clock time per phase."""

    def __init__(self):
        self.totals: Dict[str, float] = {}

    @contextmanager
    def phase(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self.totals[name] = self.totals.get(name, 0.0) + time.perf_counter() - start

    def __getitem__(self, name: str) -> float:
        return self.totals.get(name, 0.0)


def _map(fn: Callable[[T], R], items: Sequence[T], threads: int) -> List[R]:
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def step_times(start: float, span: float, step: float) -> List[float]:
    """start + k step for k = 0 .. floor(span / step), both ends included."""
    if not (math.isfinite(step) and step > 0.0):
        raise ConfigError(f"step must be > 0, got {step}")
    if not (math.isfinite(span) and span >= step):
        raise ConfigError(f"span must be >= step, got span={span}, step={step}")
    count = math.floor(span / step + _TIME_SLACK)
    return [start + k * step for k in range(count + 1)]


def evaluate_paths(paths: Sequence[RayPath], scene: Scene, t: float,
                   snapshot: Optional[SceneSnapshot] = None) -> Tuple[ChannelSample, ...]:
    """Channel samples of the valid paths of one instant.

    The paths are assumed validated at t; expired ones are skipped.
    """
    live = [p for p in paths if not p.expired]
    if not live:
        return ()
    snap = snapshot if snapshot is not None else scene.snapshot(t)
    carrier = scene.frequency
    samples = []
    for p in live:
        ray = path_field(p, scene, t, snapshot=snap, validate=False)
        shift = doppler_shift(p, carrier).shift if p.kinematics else 0.0
        samples.append(ChannelSample(
            time=t,
            path_id=p.path_id,
            signature=p.signature,
            delay=ray.delay,
            doppler=shift,
            power_w=ray.power_w,
            amplitude=ray.amplitude,
            length=ray.length,
        ))
    return tuple(samples)


def run_snapshot_rt(scene: Scene, times: Sequence[float], config: Optional[TraceConfig] = None,
                    threads: int = 1) -> List[ChannelSnapshot]:
    """Full trace at every instant: the correctness and speed-up reference."""
    config = config or TraceConfig()

    def one(t: float) -> ChannelSnapshot:
        snap = scene.snapshot(t)
        paths = attach_kinematics(trace_snapshot(scene, t, config, snapshot=snap), scene, snap)
        return ChannelSnapshot(t, evaluate_paths(paths, scene, t, snap), tuple(paths))

    return _map(one, list(times), threads)


@dataclass(eq=False)
class _Segment:
    """One trace followed over a run of consecutive steps."""

    timeline: SceneTimeline
    tracks: List[PathTrack]
    t_base: float
    born: Dict[PathKey, int]

    def at_base(self, k: int) -> bool:
        return abs(self.timeline.times[k] - self.t_base) <= _TIME_SLACK

    def first_expiry(self) -> Tuple[Optional[int], List[PathTrack]]:
        """First step (not the trace instant) where a live path expired, and those paths."""
        rows: Dict[int, List[PathTrack]] = {}
        for track in self.tracks:
            k = track.expiry
            if k is not None and not track.base.expired and not self.at_base(k):
                rows.setdefault(k, []).append(track)
        if not rows:
            return None, []
        k = min(rows)
        return k, rows[k]

    def first_birth(self) -> Tuple[Optional[int], List[PathKey]]:
        if not self.born:
            return None, []
        k = min(self.born.values())
        return k, [key for key, row in self.born.items() if row == k]


class _DRTRunner:
    def __init__(self, scene: Scene, times: List[float], config: TraceConfig, method: str, threads: int):
        self.scene = scene
        self.times = np.asarray(times, dtype=float)
        self.start = times[0]
        self.config = config
        self.method = method
        self.threads = threads
        self.clock = _Clock()
        self.events: List[PathEvent] = []
        self._candidates: Optional[List[Candidate]] = None

    @property
    def candidates(self) -> List[Candidate]:
        if self._candidates is None:
            self._candidates = enumerate_candidates(self.scene, self.config)
        return self._candidates

    def trace(self, t: float) -> List[RayPath]:
        with self.clock.phase("trace"):
            snap = self.scene.snapshot(t)
            paths = attach_kinematics(trace_snapshot(self.scene, t, self.config, snapshot=snap), self.scene, snap)
        logger.info(f"T_C refresh at t={t:.6f} s: {len(paths)} paths")
        return paths

    def follow(self, base: List[RayPath], t_base: float, rows: slice) -> _Segment:
        """Track the traced paths over times[rows] and sweep for paths they miss."""
        timeline = SceneTimeline(self.scene, self.times[rows])
        with self.clock.phase("extrapolate"):
            tracks = track_paths(base, timeline, method=self.method, threads=self.threads)
        with self.clock.phase("sweep"):
            found = sweep_paths(timeline, self.config, self.candidates, self.threads)
        live: Dict[PathKey, np.ndarray] = {}
        for track in tracks:
            key = track.base.key
            live[key] = live[key] | track.live if key in live else track.live
        segment = _Segment(timeline, tracks, t_base, {})
        for key, mask in found.items():
            missed = mask & ~live.get(key, np.zeros(len(timeline), dtype=bool))
            for k in np.flatnonzero(missed):
                if not segment.at_base(k):
                    segment.born[key] = int(k)
                    break
        return segment

    def evaluate(self, segment: _Segment, count: int, index: int) -> List[ChannelSnapshot]:
        """Channel snapshots of the first `count` steps of a segment."""
        carrier = self.scene.frequency
        columns = []
        with self.clock.phase("field"), np.errstate(all="ignore"):
            for track in segment.tracks:
                if not track.live[:count].any():
                    continue
                field = field_series(track.base, self.scene, segment.timeline, track.positions)
                doppler = doppler_series(track.states, carrier)
                columns.append((track, field, doppler))
            out = []
            for k in range(count):
                t = float(segment.timeline.times[k])
                samples = tuple(
                    ChannelSample(
                        time=t,
                        path_id=track.base.path_id,
                        signature=track.base.signature,
                        delay=float(field.delay[k]),
                        doppler=float(doppler[k]),
                        power_w=float(field.power_w[k]),
                        amplitude=complex(field.amplitude[k]),
                        length=float(field.length[k]),
                    )
                    for track, field, doppler in columns
                    if track.live[k]
                )
                out.append(ChannelSnapshot(t, samples, TrackedPaths(segment.tracks, k), index))
        return out

    def record(self, segment: _Segment, upto: int) -> None:
        """Log and keep the births and expiries of the first `upto` steps of a segment."""
        times = segment.timeline.times
        for track in segment.tracks:
            k = track.expiry
            if k is not None and k < upto and not track.base.expired and not segment.at_base(k):
                self.events.append(PathEvent(float(times[k]), track.base.path_id, EXPIRY, track.reason))
        for key, k in sorted(segment.born.items(), key=lambda item: (item[1], item[0])):
            if k < upto:
                path_id = path_id_of(key)
                logger.warning(f"Path {path_id} born at t={times[k]:.6f} s inside a T_C segment")
                self.events.append(PathEvent(float(times[k]), path_id, BIRTH))

    def manual(self, schedule: TcSchedule, span: float) -> List[ChannelSnapshot]:
        out: List[ChannelSnapshot] = []
        segments = schedule.segments(span)
        offsets = self.times - self.start
        for index, (a, b) in enumerate(segments):
            last = index == len(segments) - 1
            inside = (offsets >= a - _TIME_SLACK) & ((offsets < b - _TIME_SLACK) | last)
            rows = np.flatnonzero(inside)
            if rows.size == 0:
                continue
            t_base = self.start + a
            segment = self.follow(self.trace(t_base), t_base, slice(rows[0], rows[-1] + 1))
            self.record(segment, rows.size)
            out.extend(self.evaluate(segment, rows.size, index))
        return out

    def automatic(self, schedule: TcSchedule) -> Tuple[List[ChannelSnapshot], TcSchedule]:
        out: List[ChannelSnapshot] = []
        index = 0
        row = 0
        t_base = float(self.times[0])
        base = self.trace(t_base)
        window = AUTO_WINDOW
        while row < len(self.times):
            end = min(row + window, len(self.times))
            segment = self.follow(base, t_base, slice(row, end))
            expiry, expired = segment.first_expiry()
            birth, born = segment.first_birth()
            events = [k for k in (expiry, birth) if k is not None]
            if not events:
                self.record(segment, end - row)
                out.extend(self.evaluate(segment, end - row, index))
                row = end
                window = min(2 * window, AUTO_WINDOW_MAX)
                continue
            # auto: refresh at the first step where the traced set went stale
            k = min(events)
            self.record(segment, k + 1)
            out.extend(self.evaluate(segment, k, index))
            t_base = float(self.times[row + k])
            if expiry == k:
                cause, note = f"{len(expired)} path(s) expired", AUTO_EXPIRY
            else:
                cause, note = f"{len(born)} path(s) born", AUTO_BIRTH
            logger.warning(f"Auto T_C refresh at t={t_base:.6f} s: {cause}")
            base = self.trace(t_base)
            schedule = schedule.with_refresh(t_base - self.start, note)
            index += 1
            row += k
            window = AUTO_WINDOW
        return out, schedule


def run_drt(
    scene: Scene,
    span: float,
    step: float,
    schedule: Optional[TcSchedule] = None,
    config: Optional[TraceConfig] = None,
    method: str = "exact",
    threads: int = 1,
    reference: bool = False,
) -> DRTRun:
    """Dynamic ray tracing over [t0, t0 + span] sampled every `step` seconds.

    With a manual schedule every instant starts a new segment with a full
    trace; births found inside a segment are reported but not added. An
    automatic schedule refreshes at the first step where a path expires or
    a path the current set lacks becomes valid.

    With reference=True the same instants are also traced from scratch and
    timed, giving the speed-up ratio.
    """
    if method not in METHODS:
        raise ConfigError(f"unknown extrapolation method {method!r}, expected one of {METHODS}")
    if threads < 1:
        raise ConfigError("threads must be >= 1")
    config = config or TraceConfig()
    schedule = schedule or TcSchedule()
    times = step_times(scene.t0, span, step)
    if schedule.instants[-1] > span:
        raise ConfigError(f"schedule instant {schedule.instants[-1]} s beyond span {span} s")

    runner = _DRTRunner(scene, times, config, method, threads)
    started = time.perf_counter()
    if schedule.auto:
        snapshots, schedule = runner.automatic(schedule)
    else:
        snapshots = runner.manual(schedule, span)
    drt_total = time.perf_counter() - started

    ref_snapshots: List[ChannelSnapshot] = []
    ref_total = None
    if reference:
        started = time.perf_counter()
        ref_snapshots = run_snapshot_rt(scene, times, config, threads)
        ref_total = time.perf_counter() - started

    timing = TimingReport(
        trace=runner.clock["trace"],
        extrapolate=runner.clock["extrapolate"],
        sweep=runner.clock["sweep"],
        field=runner.clock["field"],
        drt_total=drt_total,
        reference=ref_total,
        segments=len(schedule.instants),
    )
    run = DRTRun(tuple(snapshots), schedule, timing, tuple(ref_snapshots), tuple(runner.events))
    logger.info(
        f"DRT run over {span} s in {len(times)} steps: {len(schedule.instants)} segment(s), "
        f"{run.births} birth(s), {drt_total:.3f} s"
        + (f", reference {ref_total:.3f} s" if ref_total is not None else "")
    )
    return run


def with_parse_time(run: DRTRun, seconds: float) -> DRTRun:
    return dataclasses.replace(run, timing=dataclasses.replace(run.timing, parse=seconds))
