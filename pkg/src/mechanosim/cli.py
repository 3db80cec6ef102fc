"""Command-line front end.

Subcommands: simulate, stability, steady-state, kinetic, sweep.  Each run
writes plot-ready CSV artifacts plus a ``manifest.json`` echoing the fully
resolved configuration, so an experiment can be repeated bit-identically.
Exit codes: 0 success, 2 configuration error, 3 numerical failure, 4 I/O.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, fv, kinetic, stability, steady
from .config import ExperimentSpec, build_spec, parse_config
from .errors import ConfigError, MechanosimError, NoFinitePeriod, PositivityLoss
from .signal import solve_signal

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def _write_manifest(out: Path, spec: ExperimentSpec, seconds: float, extra=None) -> None:
    payload = {
        "name": spec.name,
        "kind": spec.kind,
        "config": dict(sorted(spec.pairs.items())),
        "version": __version__,
        "wall_time_s": seconds,
    }
    if extra:
        payload.update(extra)
    (out / "manifest.json").write_text(json.dumps(payload, indent=2) + "\n")


def _run_simulate(spec: ExperimentSpec, out: Path) -> None:
    traj = fv.run(spec.macro_config())
    traj.write_snapshots_csv(out / "snapshots.csv")
    traj.write_diagnostics_csv(out / "diagnostics.csv")
    traj.final_rho.to_csv(out / "final_rho.csv")
    traj.final_S.to_csv(out / "final_S.csv")


def _run_stability(spec: ExperimentSpec, out: Path) -> None:
    report = stability.analyze(
        spec.law(),
        spec.alpha,
        spec.D,
        spec.Ds,
        S_star=spec._float("S_star", 1.0),
    )
    (out / "stability.json").write_text(report.to_json() + "\n")
    report.write_sigma_csv(out / "sigma.csv")


def _run_steady_state(spec: ExperimentSpec, out: Path) -> None:
    law = spec.law()
    S0 = spec._float("S0")
    rho0 = spec._float("rho0")
    dS = spec._float("dS", 0.0) or None
    prof = steady.profile(law, spec.alpha, S0, rho0, spec.Ds, dS)
    prof.write_csv(out / "profile.csv")
    verdict = steady.concentration_check(law, spec.alpha, prof.C0)
    summary = {
        "S0": prof.S0,
        "rho0": prof.rho0,
        "C0": prof.C0,
        "S_L": prof.S_L,
        "L_half": prof.L_half,
        "M": prof.M,
        "concentrating": verdict.concentrating,
        "concentration_reason": verdict.reason,
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")


def _run_kinetic(spec: ExperimentSpec, out: Path) -> None:
    eps_list = [float(s) for s in spec.pairs.get("kinetic.eps", "0.2,0.1,0.05").split(",")]
    times = [float(s) for s in spec.pairs.get("kinetic.times", "0.1").split(",")]
    N = spec._int("kinetic.N", 100_000)
    seed = spec._int("kinetic.seed", 0)
    d_eff = spec._float("kinetic.d_eff", 1.0)
    dt_factor = spec._float("kinetic.dt_factor", 0.05)

    cfg = spec.macro_config()
    rho0 = fv.build_initial(cfg.grid, cfg.init)
    S = solve_signal(rho0, cfg.signal)
    from dataclasses import replace

    from .velocity import MobilityParams

    frozen_cfg = replace(
        cfg,
        signal=None,
        frozen_S=S,
        mobility=MobilityParams(alpha=cfg.mobility.alpha, D=d_eff),
        t_end=max(times),
        steady_stop=0.0,
        snapshot_every=max(1, round(min(times) / cfg.dt)),
    )
    traj = fv.run(frozen_cfg)
    refs = [
        traj.rho[int(np.argmin(np.abs(traj.times - t)))] for t in times
    ]
    rows = kinetic.limit_study(
        cfg.law, cfg.mobility.alpha, S, rho0, eps_list, times, refs,
        N=N, seed=seed, d_eff=d_eff, dt_factor=dt_factor,
    )
    kinetic.write_error_csv(rows, out / "errors.csv")


def _run_sweep(spec: ExperimentSpec, out: Path) -> None:
    key = spec.pairs.get("sweep.key")
    raw = spec.pairs.get("sweep.values", "")
    values = [s.strip() for s in raw.split(",") if s.strip()]
    if not key or not values:
        raise ConfigError("sweep requires sweep.key and nonempty sweep.values")
    failures = []
    for value in values:
        pairs = dict(spec.pairs)
        pairs.pop("sweep.key", None)
        pairs.pop("sweep.values", None)
        pairs[key] = value
        pairs["kind"] = "simulate"
        pairs["name"] = f"{spec.name}-{key}-{value}"
        sub = build_spec(pairs)
        subdir = out / f"{key}={value}"
        subdir.mkdir(parents=True, exist_ok=True)
        started = time.perf_counter()
        try:
            _run_simulate(sub, subdir)
        except MechanosimError as exc:
            failures.append((value, str(exc)))
            continue
        _write_manifest(subdir, sub, time.perf_counter() - started)
    if failures:
        report = "; ".join(f"{key}={v}: {msg}" for v, msg in failures)
        raise MechanosimError(f"sweep points failed: {report}")


_RUNNERS = {
    "simulate": _run_simulate,
    "stability": _run_stability,
    "steady-state": _run_steady_state,
    "kinetic": _run_kinetic,
    "sweep": _run_sweep,
}


def run_experiment(spec: ExperimentSpec, out_dir) -> int:
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output directory: {exc}", file=sys.stderr)
        return EXIT_IO
    started = time.perf_counter()
    try:
        _RUNNERS[spec.kind](spec, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PositivityLoss, NoFinitePeriod) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except MechanosimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    _write_manifest(out, spec, time.perf_counter() - started)
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mechanosim",
        description="Mechanotaxis drift-diffusion laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _RUNNERS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="path to a key=value config file")
        p.add_argument("--preset", help="figure preset name (fig1, fig2a, ...)")
        p.add_argument("--out", required=True, help="output directory")
    args = parser.parse_args(argv)

    try:
        if args.config:
            spec = parse_config(args.config, args.preset)
        elif args.preset:
            spec = build_spec({}, args.preset)
        else:
            raise ConfigError("provide --config and/or --preset")
        if spec.kind != args.command:
            spec = build_spec({**spec.pairs, "kind": args.command}, None)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run_experiment(spec, args.out)


if __name__ == "__main__":
    raise SystemExit(main())
