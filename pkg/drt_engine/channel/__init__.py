# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""Channel observables: Doppler, PDP/PDfP grids, T_C schedules and run timing."""

from .doppler import DopplerRay, doppler_series, doppler_shift, phase_doppler
from .export import (
    read_manifest,
    write_error_csv,
    write_manifest,
    write_profile_csv,
    write_rays_csv,
    write_timing_csv,
)
from .profiles import (
    ErrorMap,
    ProfileGrid,
    ProfileLayout,
    RunComparison,
    build_pdfp,
    build_pdp,
    compare_runs,
    error_map,
)
from .runner import DRTRun, PathEvent, TimingReport, evaluate_paths, run_drt, run_snapshot_rt, step_times
from .samples import ChannelSample, ChannelSnapshot
from .schedule import AUTO_BIRTH, AUTO_EXPIRY, TcSchedule, parse_schedule

__all__ = [
    "AUTO_BIRTH",
    "AUTO_EXPIRY",
    "ChannelSample",
    "ChannelSnapshot",
    "DRTRun",
    "DopplerRay",
    "ErrorMap",
    "PathEvent",
    "ProfileGrid",
    "ProfileLayout",
    "RunComparison",
    "TcSchedule",
    "TimingReport",
    "build_pdfp",
    "build_pdp",
    "compare_runs",
    "doppler_series",
    "doppler_shift",
    "error_map",
    "evaluate_paths",
    "parse_schedule",
    "phase_doppler",
    "read_manifest",
    "run_drt",
    "run_snapshot_rt",
    "step_times",
    "write_error_csv",
    "write_manifest",
    "write_profile_csv",
    "write_rays_csv",
    "write_timing_csv",
]
