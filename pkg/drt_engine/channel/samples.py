# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Per-ray channel samples and per-instant ray sets."""

from dataclasses import dataclass, field
from typing import Sequence, Tuple

from ..rt.paths import RayPath


@dataclass(frozen=True)
class ChannelSample:
    """One valid ray at one instant."""

    time: float
    path_id: str
    signature: str
    delay: float
    doppler: float
    power_w: float
    amplitude: complex
    length: float

    @property
    def key(self) -> str:
        return self.path_id


@dataclass(frozen=True)
class ChannelSnapshot:
    """Everything known about the channel at one instant.

    `paths` also holds expired paths of the running multipath lifetime;
    `samples` only the valid ones.
    """

    time: float
    samples: Tuple[ChannelSample, ...] = ()
    paths: Sequence[RayPath] = field(default=(), compare=False)
    segment: int = 0

    @property
    def total_power(self) -> float:
        return sum(s.power_w for s in self.samples)

    @property
    def expired(self) -> Tuple[RayPath, ...]:
        return tuple(p for p in self.paths if p.expired)
