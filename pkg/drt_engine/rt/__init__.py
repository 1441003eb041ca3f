# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Snapshot ray tracing: path model, visibility and the image-method tracer."""

from .paths import Interaction, InteractionKind, PathKey, PathValidation, RayPath, TraceConfig, path_id_of
from .sweep import Candidate, enumerate_candidates, sweep_paths
from .tracer import mirror_point, trace_snapshot, validate_path, validate_paths
from .visibility import Occluders, OccluderSeries, has_line_of_sight, segment_obstructed

__all__ = [
    "Candidate",
    "Interaction",
    "InteractionKind",
    "OccluderSeries",
    "Occluders",
    "PathKey",
    "PathValidation",
    "RayPath",
    "TraceConfig",
    "enumerate_candidates",
    "has_line_of_sight",
    "mirror_point",
    "path_id_of",
    "segment_obstructed",
    "sweep_paths",
    "trace_snapshot",
    "validate_path",
    "validate_paths",
]
