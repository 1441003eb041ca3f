# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Multipath lifetime (T_C) schedules.

Instants are offsets in seconds from the start of the simulation. Each
instant starts a segment that begins with a full trace and is then
extrapolated up to the next instant.
"""

import math
from dataclasses import dataclass, replace
from typing import List, Tuple

from ..errors import ConfigError

MANUAL = "manual"
AUTO_EXPIRY = "auto-expiry"
AUTO_BIRTH = "auto-birth"


@dataclass(frozen=True)
class TcSchedule:
    instants: Tuple[float, ...] = (0.0,)
    notes: Tuple[str, ...] = (MANUAL,)
    auto: bool = False

    def __post_init__(self):
        if not self.instants or self.instants[0] != 0.0:
            raise ConfigError("a schedule must start at offset 0")
        if len(self.notes) != len(self.instants):
            raise ConfigError("one note per schedule instant is required")
        if any(b <= a for a, b in zip(self.instants, self.instants[1:])):
            raise ConfigError(f"schedule instants must be strictly increasing: {self.instants}")

    @classmethod
    def automatic(cls) -> "TcSchedule":
        return cls(auto=True)

    def segments(self, span: float) -> List[Tuple[float, float]]:
        """(start, end) offsets of every segment within [0, span]."""
        ends = list(self.instants[1:]) + [span]
        return [(a, b) for a, b in zip(self.instants, ends)]

    def with_refresh(self, offset: float, note: str = AUTO_EXPIRY) -> "TcSchedule":
        if offset <= self.instants[-1]:
            raise ConfigError(f"refresh at {offset} s is not after the last instant {self.instants[-1]} s")
        return replace(self, instants=self.instants + (offset,), notes=self.notes + (note,))

    def __str__(self) -> str:
        if self.auto and len(self.instants) == 1:
            return "auto"
        return ",".join(f"{t:g}" for t in self.instants)


def parse_schedule(text: str, span: float) -> TcSchedule:
    """Parse `auto` or a comma list of offsets such as `0,3`.

    A missing leading 0 is inserted.

    Raises:
        ConfigError: malformed, unordered or out-of-span instants
    """
    text = (text or "").strip()
    if text.lower() == "auto":
        return TcSchedule.automatic()
    if not text:
        return TcSchedule()
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"invalid T_C schedule {text!r}: expected 'auto' or a comma list of seconds")
    for v in values:
        if not math.isfinite(v) or v < 0.0 or v >= span:
            raise ConfigError(f"schedule instant {v} s outside the simulation span [0, {span})")
    if not values or values[0] != 0.0:
        values.insert(0, 0.0)
    return TcSchedule(tuple(values), (MANUAL,) * len(values))
