# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Oracles for Taylor extrapolation and moving-frame transforms."""

from typing import Any, Dict

import numpy as np

from ...geometry.kinematics import (
    inverse_relative_acceleration,
    inverse_relative_velocity,
    relative_acceleration,
    relative_velocity,
)
from ..base import BaseOracle
from ..sampling import frame_at, motion_from, random_frame, random_motion, random_state, rel_error, state_from

VELOCITY_STEP = 1e-6
ACCELERATION_STEP = 1e-4


class TaylorDerivativeOracle(BaseOracle):
    """Derivatives of the constant-acceleration state match its velocity and acceleration."""

    @property
    def name(self) -> str:
        return "taylor_derivative"

    @property
    def description(self) -> str:
        return "d/dt of KinematicState.advanced position and velocity vs its velocity and acceleration"

    @property
    def tolerance(self) -> float:
        return 1e-6

    def sample(self, rng: np.random.Generator) -> Dict[str, Any]:
        case = random_state(rng)
        case["dt"] = float(rng.uniform(-1.0, 1.0))
        return case

    def evaluate(self, case: Dict[str, Any]) -> float:
        state = state_from(case)
        dt, h = case["dt"], VELOCITY_STEP
        ahead, behind, here = state.advanced(dt + h), state.advanced(dt - h), state.advanced(dt)
        fd_v = (ahead.position - behind.position) / (2.0 * h)
        fd_a = (ahead.velocity - behind.velocity) / (2.0 * h)
        return max(rel_error(fd_v, here.velocity), rel_error(fd_a, here.acceleration))


class FrameRoundTripOracle(BaseOracle):
    """state_to_global(state_to_local(s)) == s for moving frames."""

    @property
    def name(self) -> str:
        return "frame_round_trip"

    @property
    def description(self) -> str:
        return "global -> local -> global round trip of position, velocity and acceleration"

    @property
    def tolerance(self) -> float:
        return 1e-10

    def sample(self, rng: np.random.Generator) -> Dict[str, Any]:
        return {"frame": random_frame(rng), "dt": float(rng.uniform(-2.0, 2.0)), "state": random_state(rng)}

    def evaluate(self, case: Dict[str, Any]) -> float:
        frame = frame_at(case["frame"], case["dt"])
        state = state_from(case["state"])
        back = frame.state_to_global(frame.state_to_local(state))
        return max(
            rel_error(back.position, state.position),
            rel_error(back.velocity, state.velocity),
            rel_error(back.acceleration, state.acceleration),
        )


class _LocalTrajectoryOracle(BaseOracle):
    """A global trajectory observed from a moving frame."""

    def sample(self, rng: np.random.Generator) -> Dict[str, Any]:
        return {"frame": random_frame(rng), "dt": float(rng.uniform(-2.0, 2.0)), "state": random_state(rng)}

    def observed(self, case: Dict[str, Any], offset: float):
        frame = frame_at(case["frame"], case["dt"] + offset)
        return frame.state_to_local(state_from(case["state"]).advanced(offset))


class RelativeVelocityOracle(_LocalTrajectoryOracle):
    @property
    def name(self) -> str:
        return "relative_velocity"

    @property
    def description(self) -> str:
        return "local-frame velocity vs finite difference of local coordinates"

    @property
    def tolerance(self) -> float:
        return 1e-6

    def evaluate(self, case: Dict[str, Any]) -> float:
        h = VELOCITY_STEP
        fd = (self.observed(case, h).position - self.observed(case, -h).position) / (2.0 * h)
        return rel_error(fd, self.observed(case, 0.0).velocity)


class RelativeAccelerationOracle(_LocalTrajectoryOracle):
    @property
    def name(self) -> str:
        return "relative_acceleration"

    @property
    def description(self) -> str:
        return "local-frame acceleration (Euler, Coriolis, centrifugal) vs finite difference of local velocity"

    @property
    def tolerance(self) -> float:
        return 1e-5

    def evaluate(self, case: Dict[str, Any]) -> float:
        h = ACCELERATION_STEP
        fd = (self.observed(case, h).velocity - self.observed(case, -h).velocity) / (2.0 * h)
        return rel_error(fd, self.observed(case, 0.0).acceleration)


class InverseConsistencyOracle(BaseOracle):
    """The inverse relative-motion transforms undo the forward ones."""

    @property
    def name(self) -> str:
        return "inverse_consistency"

    @property
    def description(self) -> str:
        return "inverse_relative_velocity / inverse_relative_acceleration undo the forward transforms"

    @property
    def tolerance(self) -> float:
        return 1e-10

    def sample(self, rng: np.random.Generator) -> Dict[str, Any]:
        return {"motion": random_motion(rng), "dt": float(rng.uniform(-2.0, 2.0)), "state": random_state(rng)}

    def evaluate(self, case: Dict[str, Any]) -> float:
        motion = motion_from(case["motion"])
        dt = case["dt"]
        state = state_from(case["state"])
        r = state.position - motion.center(dt)
        v_rel = relative_velocity(state.velocity, motion, r, dt)
        a_rel = relative_acceleration(state.acceleration, motion, r, v_rel, dt)
        v_back = inverse_relative_velocity(v_rel, motion, r, dt)
        a_back = inverse_relative_acceleration(a_rel, motion, r, v_rel, dt)
        return max(rel_error(v_back, state.velocity), rel_error(a_back, state.acceleration))
