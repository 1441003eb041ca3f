# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Binned power-delay and power-Doppler profiles.

A profile is an incoherent sum of ray powers over (time, delay) or
(time, Doppler) bins. Empty bins are kept apart from occupied ones: their
dBm value is NaN, never -inf, and error maps only compare bins that both
grids occupy.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, List, Sequence, Tuple

import numpy as np

from ..errors import EmptyInputError, LayoutMismatchError, ProfileError
from .samples import ChannelSample, ChannelSnapshot

logger = logging.getLogger(__name__)

AXES = ("delay", "doppler")

DEFAULT_TIME_BIN = 0.2
DEFAULT_DELAY_BIN = 1e-8
DEFAULT_DOPPLER_BIN = 14.34

# Slack for values that sit on a bin edge up to rounding.
_EDGE_SLACK = 1e-9


def _sample_value(axis: str) -> Callable[[ChannelSample], float]:
    return (lambda s: s.delay) if axis == "delay" else (lambda s: s.doppler)


@dataclass(frozen=True)
class ProfileLayout:
    """Bin layout of a profile: integer bin ranges on a fixed-width grid.

    Time and delay bins are [k w, (k+1) w). Doppler bins are centred on
    multiples of the bin width, so a static channel lands in bin 0.
    """

    axis: str
    time_bin: float
    axis_bin: float
    time_start: int
    time_count: int
    axis_start: int
    axis_count: int

    def __post_init__(self):
        if self.axis not in AXES:
            raise ProfileError(f"unknown profile axis {self.axis!r}")
        if not (self.time_bin > 0.0 and self.axis_bin > 0.0):
            raise ProfileError("bin widths must be > 0")
        if self.time_count < 1 or self.axis_count < 1:
            raise ProfileError("a layout needs at least one bin per axis")

    def time_index(self, t: float) -> int:
        return math.floor(t / self.time_bin + _EDGE_SLACK)

    def axis_index(self, value: float) -> int:
        if self.axis == "doppler":
            return math.floor(value / self.axis_bin + 0.5)
        return math.floor(value / self.axis_bin + _EDGE_SLACK)

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.time_count, self.axis_count)

    @property
    def time_edges(self) -> np.ndarray:
        return (self.time_start + np.arange(self.time_count + 1)) * self.time_bin

    @property
    def axis_edges(self) -> np.ndarray:
        k = self.axis_start + np.arange(self.axis_count + 1, dtype=float)
        if self.axis == "doppler":
            k -= 0.5
        return k * self.axis_bin

    @property
    def axis_centers(self) -> np.ndarray:
        edges = self.axis_edges
        return 0.5 * (edges[:-1] + edges[1:])

    def locate(self, t: float, value: float) -> Tuple[int, int]:
        """Row and column of a sample; raises ProfileError if it falls outside."""
        i = self.time_index(t) - self.time_start
        j = self.axis_index(value) - self.axis_start
        if not (0 <= i < self.time_count and 0 <= j < self.axis_count):
            raise ProfileError(f"sample at t={t}, {self.axis}={value} lies outside the layout")
        return i, j

    @classmethod
    def covering(
        cls,
        runs: Iterable[Sequence[ChannelSnapshot]],
        axis: str,
        time_bin: float = DEFAULT_TIME_BIN,
        axis_bin: float = None,
    ) -> "ProfileLayout":
        """Smallest layout holding every snapshot of every run.

        Delay layouts always start at zero delay.

        Raises:
            EmptyInputError: no snapshots at all
        """
        if axis_bin is None:
            axis_bin = DEFAULT_DELAY_BIN if axis == "delay" else DEFAULT_DOPPLER_BIN
        unit = cls(axis, time_bin, axis_bin, 0, 1, 0, 1)
        value = _sample_value(axis)
        times: List[int] = []
        cols: List[int] = []
        for snapshots in runs:
            for snap in snapshots:
                times.append(unit.time_index(snap.time))
                cols.extend(unit.axis_index(value(s)) for s in snap.samples)
        if not times:
            raise EmptyInputError("cannot build a profile from zero snapshots")
        t_lo, t_hi = min(times), max(times)
        if axis == "delay":
            a_lo, a_hi = 0, max(cols, default=0)
        else:
            a_lo, a_hi = min(cols, default=0), max(cols, default=0)
        return cls(axis, time_bin, axis_bin, t_lo, t_hi - t_lo + 1, a_lo, a_hi - a_lo + 1)


@dataclass(frozen=True, eq=False)
class ProfileGrid:
    """Linear power per bin plus the number of rays that landed in it."""

    layout: ProfileLayout
    power_w: np.ndarray
    counts: np.ndarray

    @property
    def occupied(self) -> np.ndarray:
        return self.counts > 0

    @property
    def power_dbm(self) -> np.ndarray:
        """Bin power in dBm; NaN for empty bins, -inf for occupied zero-power bins."""
        out = np.full(self.power_w.shape, np.nan)
        mask = self.occupied
        with np.errstate(divide="ignore"):
            out[mask] = 10.0 * np.log10(self.power_w[mask] / 1e-3)
        return out

    @property
    def total_power(self) -> float:
        return float(self.power_w.sum())

    def scaled(self, db: float) -> "ProfileGrid":
        return ProfileGrid(self.layout, self.power_w * 10.0 ** (db / 10.0), self.counts.copy())

    def rows(self) -> Iterator[Tuple[float, float, float]]:
        """(time bin start, axis bin centre, power dBm) for every occupied bin."""
        times = self.layout.time_edges
        centers = self.layout.axis_centers
        dbm = self.power_dbm
        for i, j in zip(*np.nonzero(self.occupied)):
            yield float(times[i]), float(centers[j]), float(dbm[i, j])


def _accumulate(snapshots: Sequence[ChannelSnapshot], layout: ProfileLayout) -> ProfileGrid:
    value = _sample_value(layout.axis)
    rows: List[int] = []
    cols: List[int] = []
    powers: List[float] = []
    for snap in snapshots:
        for s in snap.samples:
            i, j = layout.locate(snap.time, value(s))
            rows.append(i)
            cols.append(j)
            powers.append(s.power_w)
    power = np.zeros(layout.shape)
    counts = np.zeros(layout.shape, dtype=int)
    np.add.at(power, (rows, cols), powers)
    np.add.at(counts, (rows, cols), 1)
    return ProfileGrid(layout, power, counts)


def _build(snapshots, axis, axis_bin, time_bin, layout) -> ProfileGrid:
    if not snapshots:
        raise EmptyInputError(f"cannot build a {axis} profile from zero snapshots")
    if layout is None:
        layout = ProfileLayout.covering([snapshots], axis, time_bin, axis_bin)
    elif layout.axis != axis:
        raise LayoutMismatchError(f"layout axis is {layout.axis!r}, expected {axis!r}")
    grid = _accumulate(snapshots, layout)
    logger.debug(f"Built {axis} profile {layout.shape} from {len(snapshots)} snapshots")
    return grid


def build_pdp(snapshots: Sequence[ChannelSnapshot], delay_bin: float = DEFAULT_DELAY_BIN,
              time_bin: float = DEFAULT_TIME_BIN, layout: ProfileLayout = None) -> ProfileGrid:
    """Power-delay profile.

    Raises:
        EmptyInputError: no snapshots
    """
    return _build(snapshots, "delay", delay_bin, time_bin, layout)


def build_pdfp(snapshots: Sequence[ChannelSnapshot], doppler_bin: float = DEFAULT_DOPPLER_BIN,
               time_bin: float = DEFAULT_TIME_BIN, layout: ProfileLayout = None) -> ProfileGrid:
    """Power-Doppler profile.

    Raises:
        EmptyInputError: no snapshots
    """
    return _build(snapshots, "doppler", doppler_bin, time_bin, layout)


@dataclass(frozen=True, eq=False)
class ErrorMap:
    """|P_a - P_b| in dB on jointly occupied bins (NaN elsewhere).

    `structural` counts bins occupied in exactly one of the two grids.
    """

    layout: ProfileLayout
    abs_error_db: np.ndarray
    structural: int

    @property
    def max_error(self) -> float:
        if np.all(np.isnan(self.abs_error_db)):
            return 0.0
        return float(np.nanmax(self.abs_error_db))

    def rows(self) -> Iterator[Tuple[float, float, float]]:
        times = self.layout.time_edges
        centers = self.layout.axis_centers
        for i, j in zip(*np.nonzero(~np.isnan(self.abs_error_db))):
            yield float(times[i]), float(centers[j]), float(self.abs_error_db[i, j])


def error_map(grid_a: ProfileGrid, grid_b: ProfileGrid) -> ErrorMap:
    """Element-wise absolute dB difference of two grids with the same layout.

    Raises:
        LayoutMismatchError: the grids do not share a layout
    """
    if grid_a.layout != grid_b.layout:
        raise LayoutMismatchError(f"profile layouts differ: {grid_a.layout} vs {grid_b.layout}")
    both = grid_a.occupied & grid_b.occupied
    err = np.full(grid_a.power_w.shape, np.nan)
    a, b = grid_a.power_dbm, grid_b.power_dbm
    with np.errstate(invalid="ignore"):
        diff = np.abs(a - b)
    # two occupied zero-power bins agree exactly
    diff = np.where(np.isneginf(a) & np.isneginf(b), 0.0, diff)
    err[both] = diff[both]
    structural = int(np.count_nonzero(grid_a.occupied ^ grid_b.occupied))
    return ErrorMap(grid_a.layout, err, structural)


@dataclass(frozen=True)
class RunComparison:
    """Ray-by-ray agreement of two runs sampled at the same instants.

    births are rays the reference finds but the compared run lacks; deaths
    are rays the compared run still carries that the reference no longer finds.
    """

    max_power_error_db: float
    max_length_error: float
    max_doppler_error: float
    births: int
    deaths: int
    steps: int

    @property
    def structural(self) -> int:
        return self.births + self.deaths


def compare_runs(run: Sequence[ChannelSnapshot], reference: Sequence[ChannelSnapshot]) -> RunComparison:
    """Match rays of two runs by interaction key at each step.

    Raises:
        LayoutMismatchError: the runs are sampled at different instants
    """
    if len(run) != len(reference):
        raise LayoutMismatchError(f"runs have {len(run)} and {len(reference)} steps")
    power_err = length_err = doppler_err = 0.0
    births = deaths = 0
    for snap, ref in zip(run, reference):
        if not math.isclose(snap.time, ref.time, rel_tol=0.0, abs_tol=1e-9):
            raise LayoutMismatchError(f"step at t={snap.time} compared with t={ref.time}")
        mine: Dict[str, ChannelSample] = {s.key: s for s in snap.samples}
        theirs: Dict[str, ChannelSample] = {s.key: s for s in ref.samples}
        births += len(theirs.keys() - mine.keys())
        deaths += len(mine.keys() - theirs.keys())
        for key in mine.keys() & theirs.keys():
            a, b = mine[key], theirs[key]
            if a.power_w > 0.0 and b.power_w > 0.0:
                power_err = max(power_err, abs(10.0 * math.log10(a.power_w / b.power_w)))
            length_err = max(length_err, abs(a.length - b.length))
            doppler_err = max(doppler_err, abs(a.doppler - b.doppler))
    return RunComparison(power_err, length_err, doppler_err, births, deaths, len(run))
