# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""CSV and manifest output of channel runs.

Column order is stable and gnuplot friendly: one row per ray or per
occupied bin, header first. Every writer returns the path it wrote.
"""

import csv
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Union

from .profiles import ErrorMap, ProfileGrid
from .runner import TimingReport
from .samples import ChannelSnapshot

logger = logging.getLogger(__name__)

RAY_COLUMNS = [
    "time_s", "segment", "path_id", "signature", "delay_s", "length_m",
    "doppler_hz", "power_dbm", "amplitude_re", "amplitude_im",
]
AXIS_COLUMNS = {"delay": "delay_s", "doppler": "doppler_hz"}

PathLike = Union[str, Path]


def _num(x: float) -> str:
    if x is None:
        return ""
    return f"{x:.12g}"


def _dbm(power_w: float) -> float:
    return 10.0 * math.log10(power_w / 1e-3) if power_w > 0.0 else -math.inf


def _write(path: PathLike, header: List[str], rows: Iterable[Sequence[Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    logger.debug(f"Wrote {path}")
    return path


def write_rays_csv(path: PathLike, snapshots: Sequence[ChannelSnapshot]) -> Path:
    rows = (
        [
            _num(snap.time), snap.segment, s.path_id, s.signature, _num(s.delay), _num(s.length),
            _num(s.doppler), _num(_dbm(s.power_w)), _num(s.amplitude.real), _num(s.amplitude.imag),
        ]
        for snap in snapshots
        for s in snap.samples
    )
    return _write(path, RAY_COLUMNS, rows)


def write_profile_csv(path: PathLike, grid: ProfileGrid) -> Path:
    header = ["t_bin_s", AXIS_COLUMNS[grid.layout.axis], "power_dbm"]
    return _write(path, header, ([_num(t), _num(a), _num(p)] for t, a, p in grid.rows()))


def write_error_csv(path: PathLike, errors: ErrorMap) -> Path:
    header = ["t_bin_s", AXIS_COLUMNS[errors.layout.axis], "abs_error_db"]
    return _write(path, header, ([_num(t), _num(a), _num(e)] for t, a, e in errors.rows()))


def write_timing_csv(path: PathLike, timing: TimingReport) -> Path:
    return _write(path, ["metric", "value"], ([k, _num(v)] for k, v in timing.as_dict().items()))


def write_manifest(path: PathLike, config: Dict[str, Any], outputs: Sequence[PathLike], version: str) -> bool:
    """Write the run manifest: config echo, declared outputs and package version.

    Output paths are stored relative to the manifest directory.

    Returns:
        True if written successfully, False otherwise
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        manifest = {
            "version": version,
            "config": config,
            "outputs": sorted(
                Path(p).resolve().relative_to(path.parent.resolve()).as_posix() for p in outputs
            ),
        }
        with open(path, "w", encoding="utf-8") as f:
            json.dump(manifest, f, indent=2, sort_keys=True)
            f.write("\n")
        logger.info(f"Wrote manifest with {len(outputs)} outputs to {path}")
        return True
    except (OSError, TypeError, ValueError) as e:
        logger.error(f"Error writing manifest {path}: {e}", exc_info=True)
        return False


def read_manifest(path: PathLike) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)
