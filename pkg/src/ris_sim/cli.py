"""Command-line entry point; a thin client of the core package.

Subcommands: run (campaign), baseline (campaign with zero panels), pattern
(scattered or element pattern CSV), compare (percentile deltas between two
result directories), serve (start the HTTP service).  Exit codes: 0 success,
2 configuration error, 3 runtime error.  The RIS_SIM_SEED environment
variable overrides the config-file seed; an explicit --seed wins over both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .config import ScenarioConfig, parse_config, validate_config
from .constants import SPEED_OF_LIGHT
from .errors import InvalidConfigError, RisSimError
from .io import compare_runs, emit_results
from .netsim import run_campaign
from .ris import (
    RISPanel,
    optimal_phase,
    propagation_phase,
    quantize_phase,
    scattered_pattern,
    zero_profile,
)

SEED_ENV_VAR = "RIS_SIM_SEED"


def _resolved_config(args) -> ScenarioConfig:
    cfg = parse_config(args.config) if args.config else validate_config({})
    seed = args.seed
    if seed is None and os.environ.get(SEED_ENV_VAR):
        try:
            seed = int(os.environ[SEED_ENV_VAR])
        except ValueError as exc:
            raise InvalidConfigError(
                f"{SEED_ENV_VAR} must be an integer, got "
                f"{os.environ[SEED_ENV_VAR]!r}"
            ) from exc
    return cfg.with_overrides(seed=seed, drops=args.drops)


def _run_and_emit(cfg: ScenarioConfig, args) -> int:
    result = run_campaign(cfg, workers=args.workers)
    manifest, files = emit_results(result, args.out, formats=(args.format,))
    print(f"{len(result.records)} records from {cfg.drop.drops} drops "
          f"-> {args.out} ({len(files)} files)")
    for metric, vals in manifest.percentiles.items():
        summary = ", ".join(f"{k}={v:.2f}" for k, v in vals.items())
        print(f"  {metric}: {summary}")
    return 0


def _cmd_run(args) -> int:
    return _run_and_emit(_resolved_config(args), args)


def _cmd_baseline(args) -> int:
    cfg = _resolved_config(args).with_overrides(ris_per_sector=0)
    return _run_and_emit(cfg, args)


def _cmd_pattern(args) -> int:
    wavelength = SPEED_OF_LIGHT / args.frequency_hz
    out = Path(args.out)
    if args.kind == "element":
        from .antenna import ElementPatternParams, pattern_grid

        params = ElementPatternParams(g_e_max_dbi=args.gain_dbi)
        rows = pattern_grid(params, args.step)
        header = ("zenith_deg", "azimuth_deg", "gain_db")
        lines = [",".join(header)]
        lines += [",".join(f"{v:.9g}" for v in row) for row in rows]
        out.write_text("\n".join(lines) + "\n")
        print(f"element pattern ({rows.shape[0]} points) -> {out}")
        return 0

    panel = RISPanel(args.rows, args.cols, args.spacing_h, args.spacing_v)
    if args.target is None:
        profile = zero_profile(panel)
    else:
        tilde = propagation_phase(
            panel, args.incidence_zenith, args.incidence,
            args.target_zenith, args.target, wavelength,
        )
        profile = optimal_phase(tilde)
    if args.bits:
        profile = quantize_phase(profile, args.bits)
    pattern = scattered_pattern(
        panel, args.incidence_zenith, args.incidence, profile, args.step, wavelength
    )
    header = ("out_zenith_deg", "out_azimuth_deg", "gain_db")
    lines = [",".join(header)]
    lines += [",".join(f"{v:.9g}" for v in row) for row in pattern.rows()]
    out.write_text("\n".join(lines) + "\n")
    print(
        f"scattered pattern -> {out}; peak {pattern.peak_gain_db:.2f} dB "
        f"at azimuth {pattern.peak_azimuth_deg:.1f} deg"
    )
    return 0


def _cmd_compare(args) -> int:
    deltas = compare_runs(args.dir_a, args.dir_b)
    text = json.dumps(deltas, indent=1)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def _add_campaign_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="YAML/JSON config file (default: all defaults)")
    sub.add_argument("--seed", type=int, help="master seed override")
    sub.add_argument("--drops", type=int, help="number of drops override")
    sub.add_argument("--out", default="results", help="output directory")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--workers", type=int, default=1, help="parallel drop workers")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ris-sim",
        description="System-level simulator for RIS-assisted multi-cell networks",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    run = subs.add_parser("run", help="run a Monte-Carlo campaign")
    _add_campaign_flags(run)
    run.set_defaults(handler=_cmd_run)

    base = subs.add_parser("baseline", help="run the campaign without any panels")
    _add_campaign_flags(base)
    base.set_defaults(handler=_cmd_baseline)

    pat = subs.add_parser("pattern", help="dump a pattern CSV")
    pat.add_argument("--kind", choices=("scattered", "element"), default="scattered")
    pat.add_argument("--rows", type=int, default=16)
    pat.add_argument("--cols", type=int, default=16)
    pat.add_argument("--spacing-h", type=float, default=0.5,
                     help="horizontal spacing in wavelengths")
    pat.add_argument("--spacing-v", type=float, default=0.8,
                     help="vertical spacing in wavelengths")
    pat.add_argument("--frequency-hz", type=float, default=2.6e9, dest="frequency_hz")
    pat.add_argument("--incidence", type=float, default=30.0,
                     help="incident azimuth, degrees off the panel normal")
    pat.add_argument("--incidence-zenith", type=float, default=90.0)
    pat.add_argument("--target", type=float, default=None,
                     help="steer the outgoing lobe to this azimuth (degrees)")
    pat.add_argument("--target-zenith", type=float, default=90.0)
    pat.add_argument("--bits", type=int, choices=(0, 1, 2, 3), default=0,
                     help="quantize the profile (0 = continuous)")
    pat.add_argument("--step", type=float, default=0.5, help="grid step, degrees")
    pat.add_argument("--gain-dbi", type=float, default=8.0,
                     help="element gain for --kind element")
    pat.add_argument("--out", default="pattern.csv", help="output CSV path")
    pat.set_defaults(handler=_cmd_pattern)

    cmp_ = subs.add_parser("compare", help="percentile deltas between two runs")
    cmp_.add_argument("dir_a")
    cmp_.add_argument("dir_b")
    cmp_.add_argument("--out", help="also write the deltas to this JSON file")
    cmp_.set_defaults(handler=_cmd_compare)

    serve = subs.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(handler=_cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except InvalidConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (RisSimError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
