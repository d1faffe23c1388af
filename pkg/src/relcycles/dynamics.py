"""Vector-field contract, Runge-Kutta integration, and monodromy matrices.

A SystemField bundles a right-hand side with its dimension, an optional
forcing period, and an optional symmetry descriptor.  Time-periodic fields
are treated as autonomous fields on the time-augmented phase space: the
integrator threads the phase through the stage times, so the time-T flow map
is a well-defined stroboscopic map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from typing import Callable, Optional

import numpy as np

class StiffnessError(RuntimeError):
    """Adaptive step size hit the floor without meeting the error target."""


@dataclass(frozen=True)
class Symmetry:
    """Group action attached to a field: ``act`` moves states, ``act_tangent``
    applies the derivative of ``act`` at a state to a tangent vector."""

    group: str
    act: Callable
    act_tangent: Callable


@dataclass(frozen=True)
class SystemField:
    dimension: int
    rhs: Callable[[np.ndarray, float], np.ndarray]
    period: Optional[float] = None
    symmetry: Optional[Symmetry] = None
    state_names: Optional[tuple] = None


@dataclass(frozen=True)
class FixedStep:
    """Classical RK4 with constant step ``h`` (last step truncated)."""

    h: float


@dataclass(frozen=True)
class AdaptiveTol:
    """Embedded Fehlberg 4(5) with absolute/relative tolerance ``tol``."""

    tol: float


@dataclass(frozen=True)
class IntegrationStats:
    accepted: int = 0
    rejected: int = 0
    max_error_estimate: float = 0.0


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    stats: Optional[IntegrationStats] = None

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=float)
        if len(times) != len(states):
            raise ValueError("times and states must have matching lengths")
        if len(times) > 1 and not np.all(np.diff(times) > 0.0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


@dataclass(frozen=True)
class MonodromyResult:
    """Linearized period map and its eigenvalues (Floquet multipliers)."""

    matrix: np.ndarray
    multipliers: np.ndarray


def _rk4_step(rhs, x, t, h):
    k1 = rhs(x, t)
    k2 = rhs(x + (0.5 * h) * k1, t + 0.5 * h)
    k3 = rhs(x + (0.5 * h) * k2, t + 0.5 * h)
    k4 = rhs(x + h * k3, t + h)
    return x + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)


# Fehlberg 4(5) tableau: 4th-order propagation, 5th-order error reference.
_RKF_C = (0.0, 0.25, 3.0 / 8.0, 12.0 / 13.0, 1.0, 0.5)
_RKF_A = (
    (),
    (0.25,),
    (3.0 / 32.0, 9.0 / 32.0),
    (1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0),
    (439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0),
    (-8.0 / 27.0, 2.0, -3544.0 / 2565.0, 1859.0 / 4104.0, -11.0 / 40.0),
)
_RKF_B4 = (25.0 / 216.0, 0.0, 1408.0 / 2565.0, 2197.0 / 4104.0, -0.2, 0.0)
_RKF_ERR = (1.0 / 360.0, 0.0, -128.0 / 4275.0, -2197.0 / 75240.0, 1.0 / 50.0, 2.0 / 55.0)

_H_FLOOR = 1e-10


def _rkf45_step(rhs, x, t, h):
    k = [rhs(x, t)]
    for i in range(1, 6):
        xi = x + h * sum(a * ki for a, ki in zip(_RKF_A[i], k))
        k.append(rhs(xi, t + _RKF_C[i] * h))
    x_new = x + h * sum(b * ki for b, ki in zip(_RKF_B4, k))
    err = h * sum(e * ki for e, ki in zip(_RKF_ERR, k))
    return x_new, err


def integrate(field: SystemField, x0, t0: float, t1: float, control) -> Trajectory:
    """Integrate ``field`` from t0 to t1, recording every accepted step.

    The final state lands exactly on t1 (the last step is truncated).  With
    AdaptiveTol the controller uses the standard embedded error estimate with
    safety factor 0.9 and steps clamped to [1e-10, (t1 - t0)/10].
    """
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (field.dimension,):
        raise ValueError(f"initial state has shape {x0.shape}, expected ({field.dimension},)")
    if not t1 > t0:
        raise ValueError("t1 must be greater than t0")

    if isinstance(control, FixedStep):
        return _integrate_fixed(field.rhs, x0, t0, t1, control.h)
    if isinstance(control, AdaptiveTol):
        return _integrate_adaptive(field.rhs, x0, t0, t1, control.tol)
    raise TypeError(f"unknown integration control: {control!r}")


def _integrate_fixed(rhs, x0, t0, t1, h) -> Trajectory:
    if h <= 0.0:
        raise ValueError("step size must be positive")
    n = max(1, int(math.ceil((t1 - t0) / h - 1e-9)))
    times = [t0]
    states = [x0]
    x = x0
    t = t0
    for i in range(n):
        t_next = t1 if i == n - 1 else t0 + (i + 1) * h
        x = _rk4_step(rhs, x, t, t_next - t)
        t = t_next
        times.append(t)
        states.append(x)
    return Trajectory(np.array(times), np.array(states), IntegrationStats(accepted=n))


def _integrate_adaptive(rhs, x0, t0, t1, tol) -> Trajectory:
    if tol <= 0.0:
        raise ValueError("tolerance must be positive")
    span = t1 - t0
    h_max = span / 10.0
    h = min(span / 100.0, h_max)
    times = [t0]
    states = [x0]
    x = x0
    t = t0
    accepted = rejected = 0
    max_err = 0.0
    while t < t1:
        h_try = min(h, t1 - t)
        x_new, err = _rkf45_step(rhs, x, t, h_try)
        scale = tol + tol * np.maximum(np.abs(x), np.abs(x_new))
        err_norm = float(np.max(np.abs(err) / scale)) if x.size else 0.0
        if err_norm <= 1.0:
            t = t1 if t + h_try >= t1 else t + h_try
            x = x_new
            times.append(t)
            states.append(x)
            accepted += 1
            max_err = max(max_err, err_norm)
            grow = 5.0 if err_norm == 0.0 else min(5.0, 0.9 * err_norm**-0.2)
            h = min(max(h_try * grow, _H_FLOOR), h_max)
        else:
            rejected += 1
            if h_try <= _H_FLOOR:
                raise StiffnessError(f"step underflow at t={t:.6g} (error ratio {err_norm:.3g})")
            h = min(max(0.9 * h_try * err_norm**-0.2, _H_FLOOR), h_max)
    stats = IntegrationStats(accepted, rejected, max_err)
    return Trajectory(np.array(times), np.array(states), stats)


def _fd_steps(x) -> np.ndarray:
    # Per-coordinate central-difference step: balances truncation vs roundoff.
    return np.maximum(1e-6, 1e-6 * np.abs(x))


def rhs_jacobian(rhs, x, t) -> np.ndarray:
    """Central finite-difference Jacobian of a right-hand side."""
    d = len(x)
    steps = _fd_steps(x)
    jac = np.empty((d, d))
    for j in range(d):
        e = np.zeros(d)
        e[j] = steps[j]
        jac[:, j] = (rhs(x + e, t) - rhs(x - e, t)) / (2.0 * steps[j])
    return jac


def monodromy(
    field: SystemField,
    anchor,
    T: float,
    scheme: str = "finite-difference",
    t0: float = 0.0,
    control=None,
) -> MonodromyResult:
    """Linearized time-T flow map at ``anchor`` starting from phase ``t0``.

    ``scheme`` is "finite-difference" (central differences of the flow) or
    "tangent-propagation" (integrate the variational equation alongside the
    state); the two agree to integrator accuracy.
    """
    anchor = np.asarray(anchor, dtype=float)
    d = field.dimension
    if control is None:
        control = FixedStep(T / 1024.0)

    if scheme == "finite-difference":
        steps = _fd_steps(anchor)
        matrix = np.empty((d, d))
        for j in range(d):
            e = np.zeros(d)
            e[j] = steps[j]
            xp = integrate(field, anchor + e, t0, t0 + T, control).final
            xm = integrate(field, anchor - e, t0, t0 + T, control).final
            matrix[:, j] = (xp - xm) / (2.0 * steps[j])
    elif scheme == "tangent-propagation":
        def aug_rhs(z, t):
            x = z[:d]
            v = z[d:].reshape(d, d)
            jac = rhs_jacobian(field.rhs, x, t)
            return np.concatenate([field.rhs(x, t), (jac @ v).ravel()])

        aug = SystemField(dimension=d + d * d, rhs=aug_rhs)
        z0 = np.concatenate([anchor, np.eye(d).ravel()])
        matrix = integrate(aug, z0, t0, t0 + T, control).final[d:].reshape(d, d)
    else:
        raise ValueError(f"unknown monodromy scheme: {scheme!r}")

    return MonodromyResult(matrix, np.linalg.eigvals(matrix))


def equivariance_residual(field: SystemField, z, samples, t: float = 0.0) -> float:
    """Max norm of g.X(x) - X(g.x) over the sample states (zero iff the field
    commutes with the group action at those points)."""
    if field.symmetry is None:
        raise ValueError("field has no symmetry descriptor")
    sym = field.symmetry
    worst = 0.0
    for x in np.atleast_2d(np.asarray(samples, dtype=float)):
        pushed = sym.act_tangent(z, x, field.rhs(x, t))
        moved = field.rhs(sym.act(z, x), t)
        worst = max(worst, float(np.linalg.norm(pushed - moved)))
    return worst


def format_csv(names, times, columns) -> str:
    """Rows of ``t,<names...>`` with shortest round-trip decimal formatting."""
    columns = np.asarray(columns)
    if len(names) != columns.shape[1]:
        raise ValueError("column names must match the data width")
    lines = ["t," + ",".join(names)]
    for t, row in zip(times, columns):
        lines.append(",".join(repr(float(v)) for v in (t, *row)))
    return "\n".join(lines) + "\n"


def trajectory_to_csv(traj: Trajectory, path, names=None) -> None:
    """Write one CSV row per accepted step."""
    d = traj.states.shape[1]
    if names is None:
        names = tuple(f"x{i}" for i in range(d))
    with open(path, "w") as fh:
        fh.write(format_csv(names, traj.times, traj.states))


def trajectory_from_csv(path):
    """Read a trajectory CSV; returns (column_names, Trajectory)."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if header[0] != "t":
            raise ValueError("first column must be t")
        rows = [[float(v) for v in line.strip().split(",")] for line in fh if line.strip()]
    data = np.array(rows)
    return tuple(header[1:]), Trajectory(data[:, 0], data[:, 1:])
