# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Numerical oracle suite for the kinematics, Doppler and DRT equivalence."""

from .base import BaseOracle, OracleResult
from .registry import get_registered_oracles, register_default_oracles, register_oracle, unregister_oracle
from .report import ValidationReport, run_oracles

__all__ = [
    "BaseOracle",
    "OracleResult",
    "ValidationReport",
    "get_registered_oracles",
    "register_default_oracles",
    "register_oracle",
    "run_oracles",
    "unregister_oracle",
]
