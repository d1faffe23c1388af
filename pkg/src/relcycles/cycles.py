"""Limit-cycle detection and certification for time-periodic fields.

Forced cycles inherit the forcing period, so detection is Newton shooting on
the stroboscopic map F(x) = Phi_T(x) - x.  A converged anchor is certified by
its Floquet multipliers (eigenvalues of the monodromy at the fixed point):
all magnitudes at most 1 - MARGIN means stable, anything inside the band
around the unit circle is only marginal.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .dynamics import FixedStep, StiffnessError, SystemField, integrate, monodromy
from .reduction import PhaseShift, QuotientChart, phase_shift, reduced_field

logger = logging.getLogger(__name__)

# Stability classification band around the unit circle.
MARGIN = 1e-3


class NewtonDivergenceError(RuntimeError):
    """Shooting iteration failed to converge."""


class DegenerateCycleError(RuntimeError):
    """Shooting Jacobian is singular (a Floquet multiplier sits at 1)."""


class BasinEscapeError(RuntimeError):
    """Trajectory left the neighborhood of the cycle instead of converging."""


@dataclass(frozen=True)
class CycleCertificate:
    """A detected periodic orbit, anchored at forcing phase 0."""

    anchor: np.ndarray
    period: float
    multipliers: np.ndarray
    contraction_rate: float
    newton_residual: float
    stability: str
    phase: Optional[PhaseShift] = None
    epsilon: Optional[float] = None

    @property
    def stable(self) -> bool:
        return self.stability == "stable"


def _classify(multipliers) -> str:
    mags = np.abs(multipliers)
    if np.all(mags <= 1.0 - MARGIN):
        return "stable"
    if np.all(mags <= 1.0 + MARGIN):
        return "marginal"
    return "unstable"


def certificate_to_dict(cert: CycleCertificate) -> dict:
    from .reduction import phase_to_dict

    out = {
        "epsilon": cert.epsilon,
        "anchor": [float(v) for v in cert.anchor],
        "period": cert.period,
        "multipliers": [{"re": float(m.real), "im": float(m.imag)} for m in cert.multipliers],
        "contraction_rate": cert.contraction_rate,
        "residual": cert.newton_residual,
        "stability": cert.stability,
    }
    if cert.phase is not None:
        out["phase"] = phase_to_dict(cert.phase)
    return out


def find_stroboscopic_cycle(
    field: SystemField,
    guess,
    tol: float = 1e-10,
    max_iter: int = 25,
    control=None,
) -> CycleCertificate:
    """Newton shooting for a fixed point of the stroboscopic (time-T) map.

    The Jacobian is the finite-difference monodromy minus the identity; steps
    are damped by halving (at most 8 times) until the residual decreases.  On
    convergence the certificate carries the Floquet multipliers of a fresh
    monodromy at the fixed point.
    """
    if field.period is None:
        raise ValueError("field has no forcing period")
    T = field.period
    if control is None:
        control = FixedStep(T / 1024.0)

    def flow(x):
        return integrate(field, x, 0.0, T, control).final

    x = np.asarray(guess, dtype=float).copy()
    fx = flow(x) - x
    res = float(np.linalg.norm(fx))
    for _ in range(max_iter):
        if res < tol:
            break
        mono = monodromy(field, x, T, control=control)
        jac = mono.matrix - np.eye(field.dimension)
        svals = np.linalg.svd(jac, compute_uv=False)
        if svals[-1] < 1e-10 * max(1.0, svals[0]):
            raise DegenerateCycleError(
                f"shooting Jacobian is singular (multiplier within {svals[-1]:.1e} of 1)"
            )
        dx = np.linalg.solve(jac, -fx)
        lam = 1.0
        for _ in range(9):
            x_try = x + lam * dx
            fx_try = flow(x_try) - x_try
            res_try = float(np.linalg.norm(fx_try))
            if res_try < res:
                x, fx, res = x_try, fx_try, res_try
                break
            lam *= 0.5
        else:
            raise NewtonDivergenceError(f"line search stalled at residual {res:.3e}")
    if res >= tol:
        raise NewtonDivergenceError(f"no convergence after {max_iter} iterations (residual {res:.3e})")

    mono = monodromy(field, x, T, control=control)
    rate = float(np.max(np.log(np.abs(mono.multipliers))) / T)
    return CycleCertificate(
        anchor=x,
        period=float(T),
        multipliers=mono.multipliers,
        contraction_rate=rate,
        newton_residual=res,
        stability=_classify(mono.multipliers),
    )


def find_relative_cycle(
    field: SystemField,
    chart: QuotientChart,
    guess,
    tol: float = 1e-10,
    max_iter: int = 25,
    control=None,
    phase_tol: float = 1e-6,
) -> CycleCertificate:
    """Detect a cycle of the reduced field and attach its group phase."""
    rfield = reduced_field(field, chart)
    cert = find_stroboscopic_cycle(rfield, guess, tol=tol, max_iter=max_iter, control=control)
    ps = phase_shift(field, chart, cert.anchor, field.period, control=control, tol=phase_tol)
    return replace(cert, phase=ps)


def sample_cycle(field: SystemField, cert: CycleCertificate, n: int = 256) -> np.ndarray:
    """States of the cycle at n uniform phases over one period."""
    traj = integrate(field, cert.anchor, 0.0, cert.period, FixedStep(cert.period / n))
    return traj.states[:-1]


def distance_to_cycle(states, cycle_samples) -> np.ndarray:
    """Euclidean distance of each state to the nearest sampled cycle point."""
    states = np.atleast_2d(states)
    diffs = states[:, None, :] - cycle_samples[None, :, :]
    return np.min(np.linalg.norm(diffs, axis=2), axis=1)


def transient_convergence_rate(
    field: SystemField,
    chart: Optional[QuotientChart],
    x0,
    cycle: CycleCertificate,
    horizon: float,
    control=None,
    sample_dt: float = 0.1,
    escape_factor: float = 5.0,
) -> Optional[float]:
    """Least-squares slope of log distance-to-cycle against time.

    ``x0`` lives in the certificate's space (the reduced space when ``chart``
    is given).  The first 20% of the horizon is discarded from the fit.
    Returns None when the start already sits on the cycle; raises
    BasinEscapeError when the distance grows past ``escape_factor`` times its
    initial value.
    """
    vfield = reduced_field(field, chart) if chart is not None else field
    if control is None:
        control = FixedStep(min(0.02, horizon / 100.0))
    cycle_samples = sample_cycle(vfield, cycle)
    # Nearest-sample distances bottom out at the polygon resolution, so treat
    # anything at that scale as "on the cycle".
    gaps = np.linalg.norm(np.diff(cycle_samples, axis=0, append=cycle_samples[:1]), axis=1)
    res = float(np.max(gaps))

    traj = integrate(vfield, np.asarray(x0, dtype=float), 0.0, horizon, control)
    stride = max(1, int(round(sample_dt / (traj.times[1] - traj.times[0]))))
    times = traj.times[::stride]
    dists = distance_to_cycle(traj.states[::stride], cycle_samples)

    if np.max(dists) <= max(1e-8, res):
        return None
    if np.max(dists) > escape_factor * max(dists[0], res, 1e-12):
        raise BasinEscapeError(
            f"distance grew from {dists[0]:.3e} to {np.max(dists):.3e} over the horizon"
        )
    keep = (times >= 0.2 * horizon) & (dists > 2.0 * res)
    if int(np.sum(keep)) < 2:
        keep = times >= 0.2 * horizon
    if int(np.sum(keep)) < 2:
        raise ValueError("horizon too short for a rate fit")
    slope = np.polyfit(times[keep], np.log(np.maximum(dists[keep], 1e-300)), 1)[0]
    return float(slope)


def persistence_sweep(
    make_field: Callable[[float], SystemField],
    eps_grid: Sequence[float],
    guess,
    make_chart: Optional[Callable[[float], QuotientChart]] = None,
    continuation: bool = True,
    tol: float = 1e-10,
    max_iter: int = 25,
    control=None,
    jobs: int = 1,
) -> list:
    """Detect the forced cycle for each value of the deformation parameter.

    Entries run in ascending order.  With continuation on, each Newton solve
    warm-starts from the previous anchor; the first failure truncates the
    sweep and the partial result is returned.  Without continuation the
    entries are independent and may run in parallel (``jobs`` workers).
    """
    eps_sorted = sorted(float(e) for e in eps_grid)
    guess = np.asarray(guess, dtype=float)

    if not continuation and jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        args = [(make_field, make_chart, e, guess, tol, max_iter, control) for e in eps_sorted]
        certs = []
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_sweep_entry, *a) for a in args]
            for eps, fut in zip(eps_sorted, futures):
                try:
                    certs.append(fut.result())
                except (NewtonDivergenceError, DegenerateCycleError, StiffnessError) as exc:
                    logger.warning("sweep stopped at eps=%g: %s", eps, exc)
                    break
        return certs

    certs = []
    for eps in eps_sorted:
        start = certs[-1].anchor if (continuation and certs) else guess
        try:
            certs.append(_sweep_entry(make_field, make_chart, eps, start, tol, max_iter, control))
        except (NewtonDivergenceError, DegenerateCycleError, StiffnessError) as exc:
            logger.warning("sweep stopped at eps=%g: %s", eps, exc)
            break
    return certs


def _sweep_entry(make_field, make_chart, eps, guess, tol, max_iter, control) -> CycleCertificate:
    field = make_field(eps)
    if make_chart is not None:
        cert = find_relative_cycle(
            field, make_chart(eps), guess, tol=tol, max_iter=max_iter, control=control
        )
    else:
        cert = find_stroboscopic_cycle(field, guess, tol=tol, max_iter=max_iter, control=control)
    return replace(cert, epsilon=eps)
