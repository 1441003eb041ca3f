# Copyright 2026 the drt-engine contributors
# SPDX-License-Identifier: BSD-3-Clause

"""`drt` command line: run scenarios and drive the oracle suite.

Exit status: 0 on success, 1 when an oracle tolerance is exceeded, 2 on
scene or configuration errors.
"""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .channel.export import (
    write_error_csv,
    write_manifest,
    write_profile_csv,
    write_rays_csv,
    write_timing_csv,
)
from .channel.profiles import ProfileLayout, build_pdfp, build_pdp, compare_runs, error_map
from .channel.runner import TimingReport, run_drt, run_snapshot_rt, step_times, with_parse_time
from .config import LOG_LEVELS, MODES, RunConfig
from .drt.extrapolation import METHODS
from .errors import ConfigError, DRTError, ToleranceExceededError
from .scene.parser import load_scene
from .validation.report import run_oracles

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_ERROR = 2


def _on_off(text: str) -> bool:
    value = text.strip().lower()
    if value in ("on", "true", "yes", "1"):
        return True
    if value in ("off", "false", "no", "0"):
        return False
    raise argparse.ArgumentTypeError(f"expected on/off, got {text!r}")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON run file; flags override its values")
    parser.add_argument("--seed", type=int, help="random seed (default 0)")
    parser.add_argument("--out", help="output directory (default ./out)")
    parser.add_argument("--threads", type=int, help="worker threads (default: CPU count)")
    parser.add_argument("--log-level", choices=LOG_LEVELS, type=str.upper, help="default WARNING")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="drt", description="Dynamic ray tracing channel simulator")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate a scene and write channel profiles")
    _add_common(run)
    run.add_argument("--scene", help="scene file (.scn)")
    run.add_argument("--mode", choices=MODES, help="drt | rt | compare | validate (default drt)")
    run.add_argument("--span", type=float, help="simulated time span in s (default 5)")
    run.add_argument("--step", type=float, help="time step in s (default 0.2)")
    run.add_argument("--tc", help="T_C schedule: 'auto' or comma list of offsets in s, e.g. 0,3")
    run.add_argument("--max-reflections", type=int, help="maximum reflection order (default 2)")
    run.add_argument("--diffraction", type=_on_off, help="on | off (default on)")
    run.add_argument("--scattering", type=_on_off, help="on | off (default off)")
    run.add_argument("--doppler-bin", type=float, help="Doppler bin width in Hz (default 14.34)")
    run.add_argument("--time-bin", type=float, help="time bin width in s (default 0.2)")
    run.add_argument("--delay-bin", type=float, help="delay bin width in s (default 1e-8)")
    run.add_argument("--method", choices=METHODS, help="extrapolation method (default exact)")
    run.add_argument("--samples", type=int, help="cases per oracle in validate mode (default 1000)")

    validate = sub.add_parser("validate", help="run the numerical oracle suite")
    _add_common(validate)
    validate.add_argument("--samples", type=int, help="cases per oracle (default 200)")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """RunConfig from an optional JSON file with command-line overrides applied."""
    base = RunConfig.from_json(args.config) if args.config else RunConfig()
    overrides = {
        key: getattr(args, key, None)
        for key in (
            "scene", "mode", "span", "step", "tc", "max_reflections", "diffraction", "scattering",
            "doppler_bin", "time_bin", "delay_bin", "threads", "seed", "samples", "out", "method", "log_level",
        )
    }
    if args.command == "validate":
        overrides["mode"] = "validate"
    return base.merged(**overrides)


def cmd_validate(config: RunConfig) -> int:
    report = run_oracles(seed=config.seed, samples=config.samples)
    text = report.to_text()
    sys.stdout.write(text)
    report.save(config.out_dir / "validation.txt")
    try:
        report.raise_for_failures()
    except ToleranceExceededError as e:
        logger.error(f"Validation failed: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_TOLERANCE
    return EXIT_OK


def _write_profiles(out: Path, snapshots, config: RunConfig, layouts=None) -> List[Path]:
    pdp_layout, pdfp_layout = layouts or (None, None)
    pdp = build_pdp(snapshots, config.delay_bin, config.time_bin, layout=pdp_layout)
    pdfp = build_pdfp(snapshots, config.doppler_bin, config.time_bin, layout=pdfp_layout)
    return [
        write_rays_csv(out / "rays.csv", snapshots),
        write_profile_csv(out / "pdp.csv", pdp),
        write_profile_csv(out / "pdfp.csv", pdfp),
    ]


def cmd_run(config: RunConfig) -> int:
    """Simulate the configured scene and write CSV profiles plus a manifest."""
    config.validate()
    if config.mode == "validate":
        return cmd_validate(config)
    scene_path = Path(config.scene)
    if not scene_path.is_file():
        raise ConfigError(f"scene not found: {scene_path}")

    started = time.perf_counter()
    scene = load_scene(scene_path)
    parse_time = time.perf_counter() - started
    out = config.out_dir
    trace = config.trace_config()
    outputs: List[Path] = []

    if config.mode == "rt":
        times = step_times(scene.t0, config.span, config.step)
        started = time.perf_counter()
        snapshots = run_snapshot_rt(scene, times, trace, config.threads)
        timing = TimingReport(parse=parse_time, reference=time.perf_counter() - started, segments=len(times))
        outputs += _write_profiles(out, snapshots, config)
        print(f"RT: {len(times)} snapshots traced in {timing.reference:.3f} s")
    else:
        run = run_drt(
            scene, config.span, config.step, config.schedule(), trace,
            method=config.method, threads=config.threads, reference=config.mode == "compare",
        )
        run = with_parse_time(run, parse_time)
        timing = run.timing
        if config.mode == "compare":
            runs = [run.snapshots, run.reference]
            layouts = (
                ProfileLayout.covering(runs, "delay", config.time_bin, config.delay_bin),
                ProfileLayout.covering(runs, "doppler", config.time_bin, config.doppler_bin),
            )
            outputs += _write_profiles(out, run.snapshots, config, layouts)
            pdfp_err = error_map(
                build_pdfp(run.snapshots, layout=layouts[1]), build_pdfp(run.reference, layout=layouts[1])
            )
            pdp_err = error_map(
                build_pdp(run.snapshots, layout=layouts[0]), build_pdp(run.reference, layout=layouts[0])
            )
            outputs.append(write_error_csv(out / "error.csv", pdfp_err))
            outputs.append(write_error_csv(out / "error_pdp.csv", pdp_err))
            rays = compare_runs(run.snapshots, run.reference)
            print(f"max |dP| = {pdfp_err.max_error:.6e} dB (PDfP), {pdp_err.max_error:.6e} dB (PDP)")
            print(
                f"matched rays: max |dP| = {rays.max_power_error_db:.6e} dB, "
                f"births {rays.births}, deaths {rays.deaths} over {rays.steps} steps"
            )
        else:
            outputs += _write_profiles(out, run.snapshots, config)
        print(f"DRT: {len(run.snapshots)} steps, T_C schedule {run.schedule}, {run.refreshes} refresh(es)")
        print(f"births inside segments: {run.births}, expiries: {run.expiries}")
        if timing.speedup is not None:
            print(f"speed-up vs snapshot RT: {timing.speedup:.1f}x")

    outputs.append(write_timing_csv(out / "timing.csv", timing))
    manifest = out / "manifest.json"
    if not write_manifest(manifest, config.as_dict(), outputs, __version__):
        raise ConfigError(f"could not write {manifest}")
    logger.info(f"Run finished, outputs in {out}")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level or "WARNING"),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    try:
        config = config_from_args(args)
        logging.getLogger().setLevel(config.log_level.upper())
        if args.command == "validate":
            config.validate()
            return cmd_validate(config)
        return cmd_run(config)
    except DRTError as e:
        logger.error(f"drt {args.command} failed: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
