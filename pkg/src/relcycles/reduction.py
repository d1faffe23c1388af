"""Quotient charts, reduced vector fields, reconstruction, and phase shifts.

A QuotientChart encodes one concrete symmetry quotient: how to project a full
state to reduced coordinates, pick the identity-frame representative of a
reduced state, read off the frame of a full state, and read the body-frame
velocity used by the frame equation dg/dt = g.xi.  Only the two group types
the built-in models need are supported: "SE2" and "translation".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import math

import numpy as np
from scipy.interpolate import CubicSpline

from .dynamics import SystemField, FixedStep, Trajectory, integrate
from .lie import SE2Element, TranslationElement


class NotPeriodicError(RuntimeError):
    """The proposed anchor does not return to itself after one period."""

    def __init__(self, residual: float, tol: float):
        super().__init__(f"anchor is not periodic: residual {residual:.3e} exceeds {tol:.3e}")
        self.residual = residual


@dataclass(frozen=True)
class QuotientChart:
    group: str
    reduced_dim: int
    project: Callable[[np.ndarray], np.ndarray]
    representative: Callable[[np.ndarray], np.ndarray]
    frame_of: Callable[[np.ndarray], object]
    tangent_project: Callable[[np.ndarray, np.ndarray], np.ndarray]
    body_velocity: Callable[[np.ndarray, float], np.ndarray]
    act: Callable[[object, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class PhaseShift:
    """Per-period group displacement g with x(T) = g . x(0)."""

    group_element: object
    period: float
    residual: float


def reduced_field(field: SystemField, chart: QuotientChart) -> SystemField:
    """Push an equivariant field down to the quotient.

    The reduced right-hand side lifts the reduced state to its identity-frame
    representative, evaluates the full field there, and pushes the result
    through the derivative of the projection.
    """
    if field.symmetry is None:
        raise ValueError("field has no symmetry descriptor")

    def rhs(r, t):
        x = chart.representative(r)
        return chart.tangent_project(x, field.rhs(x, t))

    return SystemField(dimension=chart.reduced_dim, rhs=rhs, period=field.period)


def _frame_rhs(chart: QuotientChart):
    if chart.group == "SE2":
        def rhs(gvec, xi):
            c, s = math.cos(gvec[0]), math.sin(gvec[0])
            return np.array([xi[0], c * xi[1] - s * xi[2], s * xi[1] + c * xi[2]])

        return rhs
    if chart.group == "translation":
        return lambda gvec, xi: np.asarray(xi, dtype=float)
    raise ValueError(f"unknown group: {chart.group!r}")


def _frame_to_element(chart: QuotientChart, gvec) -> object:
    if chart.group == "SE2":
        return SE2Element(gvec[0], gvec[1], gvec[2])
    return TranslationElement(tuple(gvec))


def _frame_from_element(chart: QuotientChart, g) -> np.ndarray:
    if chart.group == "SE2":
        return np.array([g.theta, g.tx, g.ty])
    return np.array(g.shift)


def _body_velocity_interpolant(chart: QuotientChart, traj: Trajectory):
    times = traj.times
    if len(times) >= 4:
        spline = CubicSpline(times, traj.states, axis=0)
        reduced_at = lambda t: spline(t)
    else:
        reduced_at = lambda t: np.array(
            [np.interp(t, times, traj.states[:, j]) for j in range(traj.states.shape[1])]
        )
    return lambda t: chart.body_velocity(reduced_at(t), t)


def reconstruct(
    reduced_traj: Trajectory, chart: QuotientChart, g0, substeps: int = 2
) -> Trajectory:
    """Lift a reduced trajectory back to the full space.

    Integrates the frame equation dg/dt = g.xi(t) over the trajectory's own
    time grid (RK4, ``substeps`` per recorded interval) with the body velocity
    read from the interpolated reduced state, then applies the running frame
    to the identity-frame representative at every sample.
    """
    xi_at = _body_velocity_interpolant(chart, reduced_traj)
    frame_rhs = _frame_rhs(chart)

    gvec = _frame_from_element(chart, g0)
    times = reduced_traj.times
    full = [chart.act(g0, chart.representative(reduced_traj.states[0]))]
    for i in range(len(times) - 1):
        t, t_next = times[i], times[i + 1]
        h = (t_next - t) / substeps
        for j in range(substeps):
            tj = t + j * h
            k1 = frame_rhs(gvec, xi_at(tj))
            k2 = frame_rhs(gvec + (0.5 * h) * k1, xi_at(tj + 0.5 * h))
            k3 = frame_rhs(gvec + (0.5 * h) * k2, xi_at(tj + 0.5 * h))
            k4 = frame_rhs(gvec + h * k3, xi_at(tj + h))
            gvec = gvec + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        g = _frame_to_element(chart, gvec)
        full.append(chart.act(g, chart.representative(reduced_traj.states[i + 1])))
    return Trajectory(times.copy(), np.array(full))


def phase_shift(
    field: SystemField,
    chart: QuotientChart,
    cycle_anchor,
    T: float,
    control=None,
    tol: float = 1e-6,
) -> PhaseShift:
    """Group displacement accumulated over one period of a reduced cycle.

    Starts the full field at the identity-frame representative of the anchor;
    after time T the frame of the final state is the phase.  Raises
    NotPeriodicError if the anchor fails to close up in the quotient.
    """
    cycle_anchor = np.asarray(cycle_anchor, dtype=float)
    if control is None:
        control = FixedStep(T / 1024.0)
    x0 = chart.representative(cycle_anchor)
    xT = integrate(field, x0, 0.0, T, control).final
    residual = float(np.linalg.norm(chart.project(xT) - cycle_anchor))
    if residual > tol:
        raise NotPeriodicError(residual, tol)
    return PhaseShift(chart.frame_of(xT), float(T), residual)


def phase_to_dict(ps: PhaseShift) -> dict:
    """JSON-ready record {theta, tx, ty, period, residual}.

    Pure-translation phases store their shift in the translation slots with
    theta = 0 (a 1-d shift lands in tx).
    """
    g = ps.group_element
    if isinstance(g, SE2Element):
        theta, tx, ty = g.theta, g.tx, g.ty
    elif isinstance(g, TranslationElement):
        shift = g.shift
        theta = 0.0
        tx = shift[0] if len(shift) > 0 else 0.0
        ty = shift[1] if len(shift) > 1 else 0.0
    else:
        raise TypeError(f"unsupported group element: {g!r}")
    return {
        "theta": float(theta),
        "tx": float(tx),
        "ty": float(ty),
        "period": ps.period,
        "residual": ps.residual,
    }
