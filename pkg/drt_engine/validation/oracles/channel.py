# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Whole-scene oracles: Doppler against the phase derivative, DRT against a fresh trace."""

from typing import Any, Dict, List

import numpy as np

from ...channel.doppler import doppler_shift, phase_doppler
from ...drt.extrapolation import attach_kinematics, extrapolate_paths
from ...errors import DegenerateGeometryError
from ...rt.paths import RayPath
from ...rt.tracer import trace_snapshot
from ...scene.model import Scene
from ..base import BaseOracle
from ..sampling import ORACLE_TRACE, random_scene, scene_from
from .kinematics import VELOCITY_STEP

# Doppler shifts below this are compared in absolute terms (Hz).
DOPPLER_FLOOR = 1.0


def _traced(scene: Scene, t: float) -> List[RayPath]:
    snap = scene.snapshot(t)
    paths = trace_snapshot(scene, t, ORACLE_TRACE, snapshot=snap)
    if not paths:
        raise DegenerateGeometryError("no path between the terminals")
    return attach_kinematics(paths, scene, snap)


class DopplerPhaseOracle(BaseOracle):
    """Closed-form multi-bounce Doppler vs -(f0 / c) dL/dt of every traced path."""

    sample_limit = 25

    @property
    def name(self) -> str:
        return "doppler_phase"

    @property
    def description(self) -> str:
        return "per-path Doppler shift vs central difference of the extrapolated path length"

    @property
    def tolerance(self) -> float:
        return 1e-4

    def sample(self, rng: np.random.Generator) -> Dict[str, Any]:
        return random_scene(rng)

    def evaluate(self, case: Dict[str, Any]) -> float:
        scene = scene_from(case)
        f0 = scene.frequency
        h = VELOCITY_STEP
        paths = _traced(scene, 0.0)
        ahead = extrapolate_paths(paths, scene, h, validate=False)
        behind = extrapolate_paths(paths, scene, -h, validate=False)
        worst = 0.0
        for path, a, b in zip(paths, ahead, behind):
            if a.expired or b.expired:
                continue
            reference = phase_doppler(b.length, a.length, h, f0)
            shift = doppler_shift(path, f0).shift
            worst = max(worst, abs(shift - reference) / max(abs(reference), DOPPLER_FLOOR))
        return worst


class SnapshotEquivalenceOracle(BaseOracle):
    """Extrapolated paths coincide with a fresh trace at the later instant."""

    sample_limit = 25

    @property
    def name(self) -> str:
        return "snapshot_equivalence"

    @property
    def description(self) -> str:
        return "DRT-extrapolated vertices and lengths vs snapshot ray tracing at the same instant"

    @property
    def tolerance(self) -> float:
        return 1e-9

    def sample(self, rng: np.random.Generator) -> Dict[str, Any]:
        case = random_scene(rng)
        case["dt"] = float(rng.uniform(0.01, 0.2))
        return case

    def evaluate(self, case: Dict[str, Any]) -> float:
        scene = scene_from(case)
        dt = case["dt"]
        moved = extrapolate_paths(_traced(scene, 0.0), scene, dt)
        fresh = {p.key: p for p in trace_snapshot(scene, dt, ORACLE_TRACE)}
        worst = 0.0
        for path in moved:
            other = fresh.get(path.key)
            if path.expired or other is None:
                continue
            scale = other.length
            gap = float(np.max(np.linalg.norm(path.points - other.points, axis=1)))
            worst = max(worst, abs(path.length - other.length) / scale, gap / scale)
        return worst
