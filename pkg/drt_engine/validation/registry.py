# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Oracle registration."""

import logging
from typing import Dict

from .base import BaseOracle

logger = logging.getLogger(__name__)

# Global registry of oracle instances, in registration order
_oracle_instances: Dict[str, BaseOracle] = {}


def register_oracle(oracle: BaseOracle) -> BaseOracle:
    """Register an oracle under its name, replacing any previous one.

    Args:
        oracle: Instance of a BaseOracle subclass
    """
    if oracle.name in _oracle_instances:
        logger.debug(f"Replacing registered oracle {oracle.name}")
    _oracle_instances[oracle.name] = oracle
    return oracle


def unregister_oracle(name: str) -> None:
    _oracle_instances.pop(name, None)


def get_registered_oracles() -> Dict[str, BaseOracle]:
    """Get all registered oracle instances."""
    return _oracle_instances


def register_default_oracles() -> Dict[str, BaseOracle]:
    """Register the built-in oracle suite (idempotent)."""
    from .oracles import DEFAULT_ORACLES

    for cls in DEFAULT_ORACLES:
        oracle = cls()
        if oracle.name not in _oracle_instances:
            register_oracle(oracle)
    return _oracle_instances
