"""Experiment orchestration: configure a model, run it, write artifacts.

Usage: ``relcycles run <config.json> [--out DIR] [--jobs N]``, or one of the
typed subcommands (simulate, cycle, relative_cycle, sweep, energy_audit),
which behave like ``run`` but pin the run type.  Outputs are CSV trajectories
and JSON certificates/phase records, written atomically.  Exit codes:
0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import functools
import json
import os
import sys
import tempfile
from typing import Optional

import numpy as np

from . import models
from .config import ConfigError, ExperimentConfig, load_config
from .cycles import (
    BasinEscapeError,
    DegenerateCycleError,
    NewtonDivergenceError,
    certificate_to_dict,
    find_relative_cycle,
    find_stroboscopic_cycle,
    persistence_sweep,
)
from .dynamics import FixedStep, StiffnessError, Trajectory, format_csv, integrate
from .lie import wrap_angle
from .reduction import NotPeriodicError, phase_to_dict

NUMERICAL_ERRORS = (
    NewtonDivergenceError,
    DegenerateCycleError,
    StiffnessError,
    NotPeriodicError,
    BasinEscapeError,
    np.linalg.LinAlgError,
)


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)  # mkstemp defaults to 0600
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _write_json(path: str, obj) -> None:
    _atomic_write(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _make_field(model: str, eps: float, params: dict):
    if model == "spring":
        return models.spring_field(eps), None
    if model == "three_d":
        return models.three_d_field(eps), models.three_d_chart(eps)
    p = models.SwimmerParams(eps=eps, **params)
    return models.swimmer_field(p), models.swimmer_chart()


def _default_control(cfg: ExperimentConfig):
    if cfg.integrator is not None:
        return cfg.integrator
    period = cfg.params.get("T_f", models.SwimmerParams().T_f) if cfg.model == "swimmer" else 2.0 * np.pi
    return FixedStep(period / 2000.0)


def _default_guess(cfg: ExperimentConfig, reduced: bool) -> np.ndarray:
    if cfg.guess is not None:
        return np.array(cfg.guess)
    if cfg.model == "swimmer":
        p = models.SwimmerParams(eps=cfg.eps, **cfg.params)
        return models.rest_reduced(p) if reduced else models.rest_state(p)
    return np.zeros(2 if (cfg.model == "spring" or reduced) else 3)


def _verify_certificate(cert, field, control, tol: float) -> None:
    # Certificates must re-integrate to themselves before they are written.
    final = integrate(field, cert.anchor, 0.0, cert.period, control).final
    drift = float(np.linalg.norm(final - cert.anchor))
    if drift > 10.0 * tol:
        raise NewtonDivergenceError(f"certificate failed re-integration: drift {drift:.3e}")


def _swimmer_csv(traj: Trajectory, p: models.SwimmerParams) -> str:
    names = models.STATE_NAMES + ("E", "dE")
    extra = np.empty((len(traj.times), 2))
    for i, (t, s) in enumerate(zip(traj.times, traj.states)):
        extra[i, 0] = models.energy(s[:4], s[4:], p).total
        extra[i, 1] = models.total_power(s[:4], s[4:], t, p)
    return format_csv(names, traj.times, np.hstack([traj.states, extra]))


def _run_simulate(cfg: ExperimentConfig, out: dict) -> dict:
    field, _ = _make_field(cfg.model, cfg.eps, cfg.params)
    control = _default_control(cfg)
    if cfg.initial_state is not None:
        x0 = np.array(cfg.initial_state)
    else:
        x0 = models.rest_state(models.SwimmerParams(eps=cfg.eps, **cfg.params))
    traj = integrate(field, x0, 0.0, cfg.duration, control)
    if cfg.model == "swimmer":
        p = models.SwimmerParams(eps=cfg.eps, **cfg.params)
        _atomic_write(out["trajectory"], _swimmer_csv(traj, p))
    else:
        _atomic_write(out["trajectory"], format_csv(field.state_names, traj.times, traj.states))
    return {"steps": int(traj.stats.accepted), "final": [float(v) for v in traj.final]}


def _run_cycle(cfg: ExperimentConfig, out: dict) -> dict:
    field, _ = _make_field(cfg.model, cfg.eps, cfg.params)
    control = _default_control(cfg)
    cert = find_stroboscopic_cycle(
        field, _default_guess(cfg, reduced=False),
        tol=cfg.newton_tol, max_iter=cfg.newton_max_iter, control=control,
    )
    cert = _with_eps(cert, cfg.eps)
    _verify_certificate(cert, field, control, cfg.newton_tol)
    _write_json(out["certificate"], certificate_to_dict(cert))
    return {"anchor": [float(v) for v in cert.anchor], "stability": cert.stability}


def _run_relative_cycle(cfg: ExperimentConfig, out: dict) -> dict:
    field, chart = _make_field(cfg.model, cfg.eps, cfg.params)
    control = _default_control(cfg)
    cert = find_relative_cycle(
        field, chart, _default_guess(cfg, reduced=True),
        tol=cfg.newton_tol, max_iter=cfg.newton_max_iter, control=control,
    )
    cert = _with_eps(cert, cfg.eps)
    from .reduction import reduced_field

    _verify_certificate(cert, reduced_field(field, chart), control, cfg.newton_tol)
    _write_json(out["certificate"], certificate_to_dict(cert))
    _write_json(out["phase"], phase_to_dict(cert.phase))
    return {"anchor": [float(v) for v in cert.anchor], "phase": phase_to_dict(cert.phase)}


def _with_eps(cert, eps):
    from dataclasses import replace

    return replace(cert, epsilon=float(eps))


def _sweep_field(model, params, eps):
    return _make_field(model, eps, params)[0]


def _sweep_chart(model, params, eps):
    return _make_field(model, eps, params)[1]


def _run_sweep(cfg: ExperimentConfig, out: dict, jobs: int) -> dict:
    control = _default_control(cfg)
    make_field = functools.partial(_sweep_field, cfg.model, cfg.params)
    make_chart = None if cfg.model == "spring" else functools.partial(_sweep_chart, cfg.model, cfg.params)
    certs = persistence_sweep(
        make_field,
        cfg.eps_grid,
        _default_guess(cfg, reduced=cfg.model != "spring"),
        make_chart=make_chart,
        continuation=cfg.continuation,
        tol=cfg.newton_tol,
        max_iter=cfg.newton_max_iter,
        control=control,
        jobs=jobs,
    )
    for cert in certs:
        field = make_field(cert.epsilon)
        vfield = field
        if make_chart is not None:
            from .reduction import reduced_field

            vfield = reduced_field(field, make_chart(cert.epsilon))
        _verify_certificate(cert, vfield, control, cfg.newton_tol)
    _write_json(out["certificates"], [certificate_to_dict(c) for c in certs])
    failed = len(certs) < len(cfg.eps_grid)
    if failed:
        print(f"sweep stopped after {len(certs)}/{len(cfg.eps_grid)} entries", file=sys.stderr)
    return {"entries": len(certs), "complete": not failed}


def _run_energy_audit(cfg: ExperimentConfig, out: dict) -> dict:
    p = models.SwimmerParams(eps=cfg.eps, **cfg.params)
    field, _ = _make_field("swimmer", cfg.eps, cfg.params)
    control = _default_control(cfg)
    x0 = np.array(cfg.initial_state) if cfg.initial_state is not None else models.rest_state(p)
    traj = integrate(field, x0, 0.0, cfg.duration, control)
    _atomic_write(out["trajectory"], _swimmer_csv(traj, p))

    energies = np.array([models.energy(s[:4], s[4:], p).total for s in traj.states])
    slack = 1e-12 * np.maximum(1.0, np.abs(energies[:-1]))
    final = traj.final
    report = {
        "initial_energy": float(energies[0]),
        "final_energy": float(energies[-1]),
        "monotone_nonincreasing": bool(np.all(np.diff(energies) <= slack)),
        "max_power_residual": models.energy_rate_residual(traj, p),
        "final_velocity_norm": float(np.linalg.norm(final[4:])),
        "final_shape_error": float(abs(wrap_angle(final[0] - final[1]) - p.theta_bar)),
    }
    _write_json(out["report"], report)
    return report


def run_experiment(cfg: ExperimentConfig, out_dir: str = ".", jobs: int = 1) -> dict:
    os.makedirs(out_dir, exist_ok=True)
    out = {k: os.path.join(out_dir, v) for k, v in cfg.outputs.items()}
    if cfg.run == "simulate":
        return _run_simulate(cfg, out)
    if cfg.run == "cycle":
        return _run_cycle(cfg, out)
    if cfg.run == "relative_cycle":
        return _run_relative_cycle(cfg, out)
    if cfg.run == "sweep":
        return _run_sweep(cfg, out, jobs)
    return _run_energy_audit(cfg, out)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relcycles",
        description="Simulate dissipative symmetric systems and detect their forced (relative) limit cycles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    commands = {
        "run": "execute whatever run type the config declares",
        "simulate": "integrate the model and write a trajectory CSV",
        "cycle": "Newton-shoot a stroboscopic cycle and certify it",
        "relative_cycle": "detect a reduced cycle and its per-period group phase",
        "sweep": "detect cycles across a grid of forcing amplitudes",
        "energy_audit": "integrate the swimmer and check the energy power identity",
    }
    for name, help_text in commands.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="path to the JSON experiment config")
        p.add_argument("--out", default=".", help="output directory (default: current)")
        p.add_argument("--jobs", type=int, default=1, help="parallel workers for sweep entries")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    run_override = None if args.command == "run" else args.command
    try:
        cfg = load_config(args.config, run_override=run_override)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        summary = run_experiment(cfg, out_dir=args.out, jobs=args.jobs)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    print(json.dumps({"model": cfg.model, "run": cfg.run, **summary}, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
