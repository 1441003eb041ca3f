# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Built-in oracle suite."""

from .channel import DopplerPhaseOracle, SnapshotEquivalenceOracle
from .interactions import (
    DiffractionAccelerationOracle,
    DiffractionVelocityOracle,
    MultibounceAccelerationOracle,
    MultibounceVelocityOracle,
    ReflectionAccelerationOracle,
    ReflectionVelocityOracle,
)
from .kinematics import (
    FrameRoundTripOracle,
    InverseConsistencyOracle,
    RelativeAccelerationOracle,
    RelativeVelocityOracle,
    TaylorDerivativeOracle,
)

DEFAULT_ORACLES = (
    TaylorDerivativeOracle,
    FrameRoundTripOracle,
    RelativeVelocityOracle,
    RelativeAccelerationOracle,
    InverseConsistencyOracle,
    ReflectionVelocityOracle,
    ReflectionAccelerationOracle,
    MultibounceVelocityOracle,
    MultibounceAccelerationOracle,
    DiffractionVelocityOracle,
    DiffractionAccelerationOracle,
    DopplerPhaseOracle,
    SnapshotEquivalenceOracle,
)

__all__ = [
    "DEFAULT_ORACLES",
    "DiffractionAccelerationOracle",
    "DiffractionVelocityOracle",
    "DopplerPhaseOracle",
    "FrameRoundTripOracle",
    "InverseConsistencyOracle",
    "MultibounceAccelerationOracle",
    "MultibounceVelocityOracle",
    "ReflectionAccelerationOracle",
    "ReflectionVelocityOracle",
    "RelativeAccelerationOracle",
    "RelativeVelocityOracle",
    "SnapshotEquivalenceOracle",
    "TaylorDerivativeOracle",
]
