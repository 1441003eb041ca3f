# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Ray path data model and trace configuration."""

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from ..constants import GEOMETRIC_EPSILON, MAX_REFLECTIONS_CAP, SPEED_OF_LIGHT
from ..errors import ConfigError
from ..geometry.kinematics import ArrayFieldsEq, KinematicState
from ..geometry.vectors import Vec3


class InteractionKind(str, Enum):
    REFLECTION = "R"
    DIFFRACTION = "D"
    SCATTER = "S"


@dataclass(frozen=True, eq=False)
class Interaction(ArrayFieldsEq):
    """One vertex of a ray path on a face, an edge or a scattering tile.

    For scattering, `anchor` is the tile centroid at the scene reference time
    (a body-fixed point) and `area` the tile area.
    """

    kind: InteractionKind
    primitive_id: str
    state: KinematicState
    anchor: Optional[Vec3] = None
    area: float = 0.0

    @property
    def point(self) -> Vec3:
        return self.state.position

    def with_state(self, state: KinematicState) -> "Interaction":
        return dataclasses.replace(self, state=state)


PathKey = Tuple[Tuple[str, str], ...]


def path_id_of(key: PathKey) -> str:
    """Path id of an interaction key: LOS, or the labels joined by ">"."""
    if not key:
        return "LOS"
    return ">".join(f"{kind}[{primitive_id}]" for kind, primitive_id in key)


@dataclass(frozen=True, eq=False)
class RayPath(ArrayFieldsEq):
    """Polygonal chain TX -> interactions -> RX at absolute time `time`.

    `kinematics` is True once every vertex carries velocity and acceleration.
    """

    interactions: Tuple[Interaction, ...]
    tx: KinematicState
    rx: KinematicState
    time: float
    kinematics: bool = False
    expired: bool = False
    expiry_reason: Optional[str] = None

    @property
    def key(self) -> PathKey:
        return tuple((i.kind.value, i.primitive_id) for i in self.interactions)

    @property
    def path_id(self) -> str:
        return path_id_of(self.key)

    @property
    def signature(self) -> str:
        if not self.interactions:
            return "LOS"
        return "".join(i.kind.value for i in self.interactions)

    @property
    def is_los(self) -> bool:
        return not self.interactions

    @property
    def vertices(self) -> List[KinematicState]:
        return [self.tx] + [i.state for i in self.interactions] + [self.rx]

    @property
    def points(self) -> np.ndarray:
        return np.array([v.position for v in self.vertices])

    @property
    def segment_lengths(self) -> np.ndarray:
        return np.linalg.norm(np.diff(self.points, axis=0), axis=1)

    @property
    def length(self) -> float:
        return float(self.segment_lengths.sum())

    @property
    def delay(self) -> float:
        return self.length / SPEED_OF_LIGHT

    def count(self, kind: InteractionKind) -> int:
        return sum(1 for i in self.interactions if i.kind is kind)

    def reversed(self) -> "RayPath":
        return dataclasses.replace(self, interactions=tuple(reversed(self.interactions)), tx=self.rx, rx=self.tx)

    def expire(self, reason: str) -> "RayPath":
        return dataclasses.replace(self, expired=True, expiry_reason=reason)

    def sort_key(self) -> Tuple[float, str]:
        return (self.delay, self.path_id)


class PathValidation(NamedTuple):
    valid: bool
    reason: Optional[str] = None

    def __bool__(self):
        return self.valid


class SeriesValidation:
    """Per-step validity of one path over a time grid.

    The first failing check of a step gives its reason, in the same order as
    validate_path checks them.
    """

    def __init__(self, count: int):
        self.valid = np.ones(count, dtype=bool)
        self.reasons: List[Optional[str]] = [None] * count

    def fail(self, bad: np.ndarray, reason: str) -> None:
        new = np.asarray(bad, dtype=bool) & self.valid
        for k in np.flatnonzero(new):
            self.reasons[k] = reason
        self.valid &= ~new

    def merge(self, other: "SeriesValidation") -> None:
        """Fail the steps `other` failed, with its reasons."""
        new = ~other.valid & self.valid
        for k in np.flatnonzero(new):
            self.reasons[k] = other.reasons[k]
        self.valid &= ~new

    @property
    def any_valid(self) -> bool:
        return bool(self.valid.any())

    def at(self, k: int) -> PathValidation:
        return PathValidation(bool(self.valid[k]), self.reasons[k])


@dataclass(frozen=True)
class TraceConfig:
    """Interaction limits and numerical settings of a snapshot trace."""

    max_reflections: int = 2
    enable_diffraction: bool = True
    enable_scattering: bool = False
    combine_interactions: bool = True
    tile_size: float = 5.0
    epsilon: float = GEOMETRIC_EPSILON
    threads: int = 1

    def __post_init__(self):
        if not 0 <= self.max_reflections <= MAX_REFLECTIONS_CAP:
            raise ConfigError(f"max_reflections must be in [0, {MAX_REFLECTIONS_CAP}], got {self.max_reflections}")
        if not (math.isfinite(self.tile_size) and self.tile_size > 0.0):
            raise ConfigError(f"tile_size must be > 0, got {self.tile_size}")
        if not self.epsilon > 0.0:
            raise ConfigError("epsilon must be > 0")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")

    def replace(self, **changes) -> "TraceConfig":
        return dataclasses.replace(self, **changes)


def static_state(point: Vec3, t: float) -> KinematicState:
    return KinematicState(np.asarray(point, dtype=float), reference_time=t)


__all__ = [
    "Interaction",
    "InteractionKind",
    "PathKey",
    "PathValidation",
    "RayPath",
    "SeriesValidation",
    "TraceConfig",
    "path_id_of",
    "static_state",
]
