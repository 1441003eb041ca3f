# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Finite-difference oracles for reflection and diffraction point kinematics."""

from typing import Any, Dict, List

import numpy as np
from scipy.spatial.transform import Rotation

from ...drt.diffraction import diffract_in_frame
from ...drt.reflection import backtrack_multibounce, reflect_in_frame
from ...geometry.kinematics import KinematicState, LocalFrame
from ..base import BaseOracle
from ..sampling import (
    frame_at,
    local_terminal,
    random_frame,
    random_motion,
    random_unit,
    rel_error,
    state_from,
)
from .kinematics import ACCELERATION_STEP, VELOCITY_STEP


class _InteractionOracle(BaseOracle):
    """Interaction points of terminals moving past a moving primitive.

    Subclasses return the interaction point states at `offset` seconds after
    the case instant; the velocity check differentiates positions, the
    acceleration check differentiates velocities.
    """

    derivative = "velocity"

    @property
    def tolerance(self) -> float:
        return 1e-6 if self.derivative == "velocity" else 1e-5

    def states(self, case: Dict[str, Any], offset: float) -> List[KinematicState]:
        raise NotImplementedError

    def terminals(self, case: Dict[str, Any], offset: float):
        return state_from(case["tx"]).advanced(offset), state_from(case["rx"]).advanced(offset)

    def evaluate(self, case: Dict[str, Any]) -> float:
        here = self.states(case, 0.0)
        if self.derivative == "velocity":
            h = VELOCITY_STEP
            ahead, behind = self.states(case, h), self.states(case, -h)
            return max(
                rel_error((a.position - b.position) / (2.0 * h), s.velocity)
                for a, b, s in zip(ahead, behind, here)
            )
        h = ACCELERATION_STEP
        ahead, behind = self.states(case, h), self.states(case, -h)
        return max(
            rel_error((a.velocity - b.velocity) / (2.0 * h), s.acceleration)
            for a, b, s in zip(ahead, behind, here)
        )


class _ReflectionOracle(_InteractionOracle):
    def sample(self, rng: np.random.Generator) -> Dict[str, Any]:
        frame = random_frame(rng)

        def front() -> np.ndarray:
            return np.array([rng.uniform(-20.0, 20.0), rng.uniform(1.0, 20.0), rng.uniform(-20.0, 20.0)])

        return {"frame": frame, "tx": local_terminal(rng, frame, front()), "rx": local_terminal(rng, frame, front())}

    def states(self, case: Dict[str, Any], offset: float) -> List[KinematicState]:
        tx, rx = self.terminals(case, offset)
        return [reflect_in_frame(frame_at(case["frame"], offset), tx, rx)]


class ReflectionVelocityOracle(_ReflectionOracle):
    @property
    def name(self) -> str:
        return "reflection_velocity"

    @property
    def description(self) -> str:
        return "reflection point velocity on a moving face vs finite difference of its position"


class ReflectionAccelerationOracle(_ReflectionOracle):
    derivative = "acceleration"

    @property
    def name(self) -> str:
        return "reflection_acceleration"

    @property
    def description(self) -> str:
        return "reflection point acceleration on a moving face vs finite difference of its velocity"


class _MultibounceOracle(_InteractionOracle):
    """Two facing walls of a moving canyon, two or three bounces."""

    def sample(self, rng: np.random.Generator) -> Dict[str, Any]:
        width = float(rng.uniform(15.0, 40.0))
        # walls within a few degrees of parallel
        small = Rotation.from_rotvec(rng.uniform(0.0, 0.05) * random_unit(rng)).as_matrix()
        facing_north = np.column_stack(([1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]))
        south = {"origin": [0.0, 0.0, 0.0], "orientation": small.tolist(), "motion": _slow(random_motion(rng))}
        north = {"origin": [0.0, width, 0.0], "orientation": (small @ facing_north).tolist(),
                 "motion": _slow(random_motion(rng))}

        def between() -> np.ndarray:
            return np.array([rng.uniform(-30.0, 30.0), rng.uniform(3.0, width - 3.0), rng.uniform(0.0, 5.0)])

        world = {"origin": [0.0, 0.0, 0.0], "orientation": np.eye(3).tolist(), "motion": {"kind": "static"}}
        return {
            "walls": [south, north],
            "bounces": int(rng.integers(2, 4)),
            "tx": local_terminal(rng, world, between()),
            "rx": local_terminal(rng, world, between()),
        }

    def states(self, case: Dict[str, Any], offset: float) -> List[KinematicState]:
        walls: List[LocalFrame] = [frame_at(w, offset) for w in case["walls"]]
        frames = [walls[i % 2] for i in range(case["bounces"])]
        tx, rx = self.terminals(case, offset)
        return backtrack_multibounce(frames, tx, rx)


class MultibounceVelocityOracle(_MultibounceOracle):
    @property
    def name(self) -> str:
        return "multibounce_velocity"

    @property
    def description(self) -> str:
        return "velocities of every bounce of an image-method chain vs finite differences"


class MultibounceAccelerationOracle(_MultibounceOracle):
    derivative = "acceleration"

    @property
    def name(self) -> str:
        return "multibounce_acceleration"

    @property
    def description(self) -> str:
        return "accelerations of every bounce of an image-method chain vs finite differences of velocity"


def _slow(motion: Dict[str, Any]) -> Dict[str, Any]:
    """Keep canyon walls from spinning far from the street over the case."""
    if motion.get("kind") == "rotating":
        motion["angular_speed"] *= 0.05
        motion["angular_acceleration"] *= 0.05
    return motion


class _DiffractionOracle(_InteractionOracle):
    def sample(self, rng: np.random.Generator) -> Dict[str, Any]:
        frame = random_frame(rng)

        def off_edge() -> np.ndarray:
            radius = rng.uniform(1.0, 25.0)
            angle = rng.uniform(0.0, 2.0 * np.pi)
            return np.array([radius * np.cos(angle), radius * np.sin(angle), rng.uniform(-20.0, 20.0)])

        return {"frame": frame, "tx": local_terminal(rng, frame, off_edge()), "rx": local_terminal(rng, frame, off_edge())}

    def states(self, case: Dict[str, Any], offset: float) -> List[KinematicState]:
        tx, rx = self.terminals(case, offset)
        state, _ = diffract_in_frame(frame_at(case["frame"], offset), tx, rx)
        return [state]


class DiffractionVelocityOracle(_DiffractionOracle):
    @property
    def name(self) -> str:
        return "diffraction_velocity"

    @property
    def description(self) -> str:
        return "diffraction point velocity on a moving edge vs finite difference of its position"


class DiffractionAccelerationOracle(_DiffractionOracle):
    derivative = "acceleration"

    @property
    def name(self) -> str:
        return "diffraction_acceleration"

    @property
    def description(self) -> str:
        return "diffraction point acceleration on a moving edge vs finite difference of its velocity"
