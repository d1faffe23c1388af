"""Experiment configuration: a flat JSON file, schema-checked before any
computation runs.  Unknown keys are rejected everywhere."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .dynamics import AdaptiveTol, FixedStep
from .models import SwimmerParams

MODELS = ("spring", "three_d", "swimmer")
RUNS = ("simulate", "cycle", "relative_cycle", "sweep", "energy_audit")

_TOP_KEYS = {
    "model",
    "run",
    "eps",
    "eps_grid",
    "params",
    "integrator",
    "newton",
    "duration",
    "initial_state",
    "guess",
    "continuation",
    "outputs",
}
_SWIMMER_PARAM_KEYS = {
    "M1", "M2", "I1", "I2", "k", "theta_bar", "c_B", "c_t", "c_n", "L1", "L2", "T_f",
}
_OUTPUT_KEYS = {"trajectory", "certificate", "certificates", "phase", "report"}

_DEFAULT_OUTPUTS = {
    "simulate": {"trajectory": "trajectory.csv"},
    "cycle": {"certificate": "certificate.json"},
    "relative_cycle": {"certificate": "certificate.json", "phase": "phase.json"},
    "sweep": {"certificates": "certificates.json"},
    "energy_audit": {"trajectory": "trajectory.csv", "report": "energy.json"},
}


class ConfigError(ValueError):
    """The experiment configuration is malformed."""


@dataclass(frozen=True)
class ExperimentConfig:
    model: str
    run: str
    eps: float = 0.0
    eps_grid: Optional[tuple] = None
    params: dict = field(default_factory=dict)
    integrator: object = None
    newton_tol: float = 1e-10
    newton_max_iter: int = 25
    duration: Optional[float] = None
    initial_state: Optional[tuple] = None
    guess: Optional[tuple] = None
    continuation: bool = True
    outputs: dict = field(default_factory=dict)


def _require_number(value, name, positive=False, nonnegative=False) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    v = float(value)
    if not math.isfinite(v):
        raise ConfigError(f"{name} must be finite")
    if positive and not v > 0.0:
        raise ConfigError(f"{name} must be positive")
    if nonnegative and v < 0.0:
        raise ConfigError(f"{name} must be nonnegative")
    return v


def _require_vector(value, name) -> tuple:
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{name} must be a nonempty array of numbers")
    return tuple(_require_number(v, f"{name}[{i}]") for i, v in enumerate(value))


def _parse_integrator(raw):
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise ConfigError("integrator must be an object")
    kind = raw.get("kind")
    if kind == "fixed":
        extra = set(raw) - {"kind", "h"}
        if extra:
            raise ConfigError(f"unknown integrator keys: {sorted(extra)}")
        if "h" not in raw:
            raise ConfigError("fixed integrator requires h")
        return FixedStep(_require_number(raw["h"], "integrator.h", positive=True))
    if kind == "adaptive":
        extra = set(raw) - {"kind", "tol"}
        if extra:
            raise ConfigError(f"unknown integrator keys: {sorted(extra)}")
        if "tol" not in raw:
            raise ConfigError("adaptive integrator requires tol")
        return AdaptiveTol(_require_number(raw["tol"], "integrator.tol", positive=True))
    raise ConfigError('integrator.kind must be "fixed" or "adaptive"')


def parse_config(raw: dict, run_override: Optional[str] = None) -> ExperimentConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config root must be an object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    model = raw.get("model")
    if model not in MODELS:
        raise ConfigError(f"model must be one of {MODELS}, got {model!r}")

    run = raw.get("run")
    if run_override is not None:
        if run is not None and run != run_override:
            raise ConfigError(f"config run={run!r} conflicts with the {run_override} subcommand")
        run = run_override
    if run not in RUNS:
        raise ConfigError(f"run must be one of {RUNS}, got {run!r}")

    params = raw.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("params must be an object")
    if model == "swimmer":
        extra = set(params) - _SWIMMER_PARAM_KEYS
        if extra:
            raise ConfigError(f"unknown swimmer params: {sorted(extra)}")
        params = {k: _require_number(v, f"params.{k}") for k, v in params.items()}
    elif params:
        raise ConfigError(f"model {model!r} takes no params")

    eps = _require_number(raw.get("eps", 0.0), "eps", nonnegative=True)
    eps_grid = raw.get("eps_grid")
    if eps_grid is not None:
        eps_grid = _require_vector(eps_grid, "eps_grid")

    if run == "sweep":
        if eps_grid is None:
            raise ConfigError("sweep requires eps_grid")
        if "eps" in raw:
            raise ConfigError("sweep takes eps_grid, not eps")
    elif eps_grid is not None:
        raise ConfigError("eps_grid is only valid for sweep")

    if run == "relative_cycle" and model == "spring":
        raise ConfigError("spring has no symmetry; relative_cycle needs three_d or swimmer")
    if run == "energy_audit" and model != "swimmer":
        raise ConfigError("energy_audit is only defined for the swimmer")

    duration = raw.get("duration")
    if run in ("simulate", "energy_audit"):
        duration = _require_number(duration, "duration", positive=True)
    elif duration is not None:
        raise ConfigError("duration is only valid for simulate/energy_audit")

    initial_state = raw.get("initial_state")
    if initial_state is not None:
        initial_state = _require_vector(initial_state, "initial_state")
    if run in ("simulate", "energy_audit") and initial_state is None and model != "swimmer":
        raise ConfigError(f"simulate on {model!r} requires initial_state")

    guess = raw.get("guess")
    if guess is not None:
        guess = _require_vector(guess, "guess")

    newton = raw.get("newton", {})
    if not isinstance(newton, dict):
        raise ConfigError("newton must be an object")
    extra = set(newton) - {"tol", "max_iter"}
    if extra:
        raise ConfigError(f"unknown newton keys: {sorted(extra)}")
    newton_tol = _require_number(newton.get("tol", 1e-10), "newton.tol", positive=True)
    max_iter = newton.get("max_iter", 25)
    if isinstance(max_iter, bool) or not isinstance(max_iter, int) or max_iter < 1:
        raise ConfigError("newton.max_iter must be a positive integer")

    continuation = raw.get("continuation", True)
    if not isinstance(continuation, bool):
        raise ConfigError("continuation must be a boolean")

    outputs = dict(_DEFAULT_OUTPUTS[run])
    raw_outputs = raw.get("outputs", {})
    if not isinstance(raw_outputs, dict):
        raise ConfigError("outputs must be an object")
    extra = set(raw_outputs) - set(outputs)
    if extra:
        raise ConfigError(f"unknown output keys for {run}: {sorted(extra)}")
    for key, val in raw_outputs.items():
        if not isinstance(val, str) or not val:
            raise ConfigError(f"outputs.{key} must be a nonempty filename")
        outputs[key] = val

    cfg = ExperimentConfig(
        model=model,
        run=run,
        eps=eps,
        eps_grid=eps_grid,
        params=params,
        integrator=_parse_integrator(raw.get("integrator")),
        newton_tol=newton_tol,
        newton_max_iter=max_iter,
        duration=duration,
        initial_state=initial_state,
        guess=guess,
        continuation=continuation,
        outputs=outputs,
    )
    _check_dimensions(cfg)
    return cfg


def _state_dim(model: str, reduced: bool = False) -> int:
    if model == "spring":
        return 2
    if model == "three_d":
        return 2 if reduced else 3
    return 5 if reduced else 8


def _check_dimensions(cfg: ExperimentConfig) -> None:
    if cfg.initial_state is not None:
        want = _state_dim(cfg.model)
        if len(cfg.initial_state) != want:
            raise ConfigError(f"initial_state must have {want} entries for {cfg.model!r}")
    if cfg.guess is not None:
        # Symmetric models shoot in the quotient for relative_cycle/sweep.
        reduced = cfg.run in ("relative_cycle", "sweep") and cfg.model != "spring"
        want = _state_dim(cfg.model, reduced=reduced)
        if len(cfg.guess) != want:
            raise ConfigError(f"guess must have {want} entries for this run")
    if cfg.model == "swimmer":
        try:
            SwimmerParams(eps=cfg.eps, **cfg.params)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None


def load_config(path, run_override: Optional[str] = None) -> ExperimentConfig:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return parse_config(raw, run_override=run_override)
