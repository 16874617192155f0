"""Command-line front end: sweep, synthesize, tune, and calibrate verbs.

Exit codes: 0 success, 1 config or usage error, 2 I/O error, 3 infeasible
synthesis target, 4 calibration non-convergence. All outputs are
deterministic: the same config and flags produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import replace

from . import __version__
from .antmodel import sweep
from .bandplan import (
    BandPlan,
    FrequencyIntervalSet,
    builtin_bandplan,
    coverage_report,
    load_band_plan,
    tuning_sweep,
    tuning_union,
)
from .config import RunConfig, default_config, load_config, write_config
from .errors import ConfigError, ConvergenceError, InfeasibleTargetError
from .outputs import (
    format_sig,
    read_bands_csv,
    write_bands_csv,
    write_sweep_csv,
    write_svg,
    write_touchstone,
)
from .resosynth import calibrate, find_resonances, synthesize_lc
from .rfcore import varactor_capacitance

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_INFEASIBLE = 3
EXIT_NO_CONVERGENCE = 4


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with exit status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _parse_voltages(text: str) -> tuple[float, ...]:
    """Parse `a,b,c` lists or `start:stop:step` ranges (inclusive) of volts."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"voltage range must be start:stop:step, got {text!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError as exc:
            raise ConfigError(f"bad number in voltage range {text!r}") from exc
        if step <= 0 or stop < start:
            raise ConfigError(f"voltage range needs step > 0 and stop >= start, got {text!r}")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return tuple(start + i * step for i in range(n))
    try:
        vals = tuple(float(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise ConfigError(f"bad number in voltage list {text!r}") from exc
    if not vals:
        raise ConfigError(f"empty voltage list {text!r}")
    return vals


def _mhz_span(lo: float, hi: float) -> str:
    return f"{lo / 1e6:.3f}-{hi / 1e6:.3f}"


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True, indent=2))


def _interval_list(bands: FrequencyIntervalSet) -> list[list[float]]:
    return [[iv.lo, iv.hi] for iv in bands]


def cmd_sweep(cfg: RunConfig, args: argparse.Namespace, out_dir: str) -> int:
    """Run one bias point over the sweep grid and write CSV (plus .s1p/.svg)."""
    c1 = varactor_capacitance(cfg.varactor, args.voltage)
    net = replace(cfg.resonator, c1=c1)
    profile = sweep(cfg.geometry, net, cfg.f_start, cfg.f_stop, cfg.n_points)
    tag = format_sig(args.voltage)
    paths = {"csv": os.path.join(out_dir, f"sweep_{tag}v.csv")}
    write_sweep_csv(profile, paths["csv"])
    if args.s1p:
        paths["s1p"] = os.path.join(out_dir, f"sweep_{tag}v.s1p")
        write_touchstone(profile, paths["s1p"])
    if args.svg:
        paths["svg"] = os.path.join(out_dir, f"sweep_{tag}v.svg")
        write_svg(profile, paths["svg"], cfg.threshold_db)
    if args.json:
        _emit_json(
            {
                "voltage_v": args.voltage,
                "c1_pf": c1 / 1e-12,
                "n_points": cfg.n_points,
                "f_start_hz": cfg.f_start,
                "f_stop_hz": cfg.f_stop,
                "files": paths,
            }
        )
    else:
        for key in ("csv", "s1p", "svg"):
            if key in paths:
                print(f"wrote {paths[key]}")
    return EXIT_OK


def cmd_synthesize(cfg: RunConfig, args: argparse.Namespace, out_dir: str) -> int:
    """Solve the resonator (L, C) for two target resonances and report it."""
    f1, f2 = args.f1_hz, args.f2_hz
    if not 0 < f1 < f2:
        raise ConfigError(f"need 0 < f1 < f2, got ({f1}, {f2})")
    result = synthesize_lc(cfg.geometry, f1, f2, mode=args.mode)
    if args.json:
        _emit_json(
            {
                "f1_hz": f1,
                "f2_hz": f2,
                "method": result.method,
                "l_nh": result.l / 1e-9,
                "c_pf": result.c / 1e-12,
                "residual_f1_ohm": result.residual_f1,
                "residual_f2_ohm": result.residual_f2,
            }
        )
    else:
        print(f"method: {result.method}")
        print(f"l_nh: {format_sig(result.l / 1e-9)}")
        print(f"c_pf: {format_sig(result.c / 1e-12)}")
        print(f"residual_f1_ohm: {format_sig(result.residual_f1)}")
        print(f"residual_f2_ohm: {format_sig(result.residual_f2)}")
    return EXIT_OK


def _coverage_lines(report) -> list[str]:
    lines = [f"{'system':<9} {'verdict':<10} uncovered_mhz"]
    for sc in report.systems:
        if sc.uncovered:
            gaps = " ".join(_mhz_span(lo, hi) for lo, hi in sc.uncovered)
        else:
            gaps = "-"
        lines.append(f"{sc.name:<9} {sc.verdict:<10} {gaps}")
    lines.append(f"overall: {'covered' if report.overall else 'not covered'}")
    return lines


def cmd_tune(cfg: RunConfig, args: argparse.Namespace, out_dir: str) -> int:
    """Sweep bias voltages (or load fixture bands), union, and report coverage."""
    plan = load_band_plan(args.plan) if args.plan else builtin_bandplan()
    if args.bands_from:
        rows = read_bands_csv(args.bands_from)
        voltages = [v for v, _ in rows]
        per_voltage = [bs for _, bs in rows]
        union = tuning_union(per_voltage)
        report = coverage_report(union, plan)
    else:
        voltages = list(_parse_voltages(args.voltages) if args.voltages else cfg.voltages)
        per_voltage, union, report = tuning_sweep(
            cfg.geometry,
            cfg.resonator,
            cfg.varactor,
            voltages,
            (cfg.f_start, cfg.f_stop),
            cfg.threshold_db,
            cfg.n_points,
            plan,
        )
    bands_path = os.path.join(out_dir, "bands.csv")
    write_bands_csv(list(zip(voltages, per_voltage)), bands_path)
    if args.json:
        _emit_json(
            {
                "per_voltage": [
                    {
                        "voltage_v": v,
                        "bands_hz": _interval_list(bs),
                        "truncated": [iv.truncated for iv in bs],
                    }
                    for v, bs in zip(voltages, per_voltage)
                ],
                "union_hz": _interval_list(union),
                "coverage": [
                    {
                        "system": sc.name,
                        "verdict": sc.verdict,
                        "uncovered_hz": [[lo, hi] for lo, hi in sc.uncovered],
                    }
                    for sc in report.systems
                ],
                "overall": report.overall,
                "files": {"bands_csv": bands_path},
            }
        )
    else:
        print(f"wrote {bands_path}")
        spans = " ".join(_mhz_span(iv.lo, iv.hi) for iv in union) or "-"
        print(f"union_mhz: {spans}")
        for line in _coverage_lines(report):
            print(line)
    return EXIT_OK


def cmd_calibrate(cfg: RunConfig, args: argparse.Namespace, out_dir: str) -> int:
    """Fit the geometry to two measured resonances and write the new config."""
    f1, f2 = args.f1_hz, args.f2_hz
    if not 0 < f1 < f2:
        raise ConfigError(f"need 0 < f1 < f2, got ({f1}, {f2})")
    result = calibrate(cfg.geometry, cfg.resonator, (f1, f2))
    out_path = args.out_config or os.path.join(out_dir, "calibrated.cfg")
    fitted = replace(cfg, geometry=result.geometry)
    write_config(fitted, out_path, header="calibrated configuration")
    roots = find_resonances(
        result.geometry, cfg.resonator, 0.5 * f1, 1.5 * f2, n_grid=601
    )
    if args.json:
        _emit_json(
            {
                "objective": result.objective,
                "converged": result.converged,
                "iterations": result.iterations,
                "resonances_hz": list(roots),
                "theta_open_deg": math.degrees(result.geometry.theta_open_ref),
                "theta_short_deg": math.degrees(result.geometry.theta_short_ref),
                "feed_fraction": result.geometry.feed_fraction,
                "files": {"config": out_path},
            }
        )
    else:
        print(f"objective: {result.objective:.6e}")
        print(f"converged: {'yes' if result.converged else 'no'}")
        print(f"resonances_mhz: {' '.join(f'{r / 1e6:.3f}' for r in roots)}")
        print(f"wrote {out_path}")
    if not result.converged:
        print(
            f"warning: calibration objective {result.objective:.3e} did not reach 1e-4; "
            "wrote best-found geometry",
            file=sys.stderr,
        )
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """Construct the CLI parser with shared flags on every verb."""
    shared = _Parser(add_help=False)
    shared.add_argument("--config", metavar="PATH", help="config file (defaults built in)")
    shared.add_argument("--json", action="store_true", help="machine-readable stdout")
    shared.add_argument("--out", metavar="DIR", help="output directory (default from config)")

    parser = _Parser(prog="ifatuner", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p_sweep = sub.add_parser("sweep", parents=[shared], help="return-loss sweep at one bias")
    p_sweep.add_argument("--voltage", type=float, default=0.0, help="bias voltage (V)")
    p_sweep.add_argument("--s1p", action="store_true", help="also write Touchstone .s1p")
    p_sweep.add_argument("--svg", action="store_true", help="also write an SVG plot")
    p_sweep.set_defaults(func=cmd_sweep)

    p_syn = sub.add_parser("synthesize", parents=[shared], help="solve resonator L and C")
    p_syn.add_argument("f1_hz", type=float, help="lower resonance target (Hz)")
    p_syn.add_argument("f2_hz", type=float, help="upper resonance target (Hz)")
    p_syn.add_argument(
        "--mode",
        choices=("closed_form", "numeric", "auto"),
        default="auto",
        help="solver selection (default auto)",
    )
    p_syn.set_defaults(func=cmd_synthesize)

    p_tune = sub.add_parser("tune", parents=[shared], help="bias sweep, bands, coverage")
    p_tune.add_argument(
        "--voltages", metavar="LIST", help="volts as a,b,c or start:stop:step"
    )
    p_tune.add_argument(
        "--bands-from", metavar="CSV", help="use measured bands instead of the model"
    )
    p_tune.add_argument("--plan", metavar="PATH", help="band-plan file overriding the built-in")
    p_tune.set_defaults(func=cmd_tune)

    p_cal = sub.add_parser("calibrate", parents=[shared], help="fit geometry to measurements")
    p_cal.add_argument("f1_hz", type=float, help="measured lower resonance (Hz)")
    p_cal.add_argument("f2_hz", type=float, help="measured upper resonance (Hz)")
    p_cal.add_argument("--out-config", metavar="PATH", help="fitted config path")
    p_cal.set_defaults(func=cmd_calibrate)
    return parser


def main(argv: list[str] | None = None) -> int:
    """Entry point; returns the process exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if args.config else default_config()
        out_dir = args.out if args.out else cfg.out_dir
        os.makedirs(out_dir, exist_ok=True)
        return args.func(cfg, args, out_dir)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleTargetError as exc:
        print(f"error: infeasible synthesis target: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def run() -> None:
    """Console-script shim."""
    sys.exit(main())


if __name__ == "__main__":
    run()
