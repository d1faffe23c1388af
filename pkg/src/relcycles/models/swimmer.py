"""Planar two-link swimmer with joint spring, joint damping, and fluid drag.

Two rigid links are hinged together at a point; the configuration is
q = (phi1, phi2, x, y) with the link angles measured against the lab x-axis
and (x, y) the hinge position.  Each link's center of mass sits at unit
distance from the hinge along its axis, so the kinetic energy of link i is

    K_i = I_i/2 * dphi_i^2
        + M_i/2 * ((dx - sin(phi_i) dphi_i)^2 + (dy + cos(phi_i) dphi_i)^2).

A torsional spring k/2 (phi1 - phi2 - theta_bar)^2 holds the interior angle
theta = phi1 - phi2 near its rest value.  Dissipation comes from a joint
damper -c_B thetadot dtheta and from anisotropic resistive drag distributed
along each link (tangential/normal coefficients c_t <= c_n per unit length);
both are built from body-frame velocities, so the whole field commutes with
rigid rotations and translations of the plane.  The optional drive is a
periodic joint torque eps*sin(2 pi t / T_f) dtheta.

The full state is the 8-vector (q, qdot).  The SE(2) quotient uses the frame
(phi1, x, y): reduced coordinates are (theta, thetadot, omega, v1, v2) with
omega = dphi1 and (v1, v2) the hinge velocity in the link-1 frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..dynamics import Symmetry, SystemField
from ..lie import SE2Element, TWO_PI, tangent_act, tangent_act_linear, wrap_angle
from ..reduction import QuotientChart

STATE_NAMES = ("phi1", "phi2", "x", "y", "dphi1", "dphi2", "dx", "dy")
REDUCED_NAMES = ("theta", "dtheta", "omega", "v1", "v2")

# Central-difference step for the mass-matrix derivatives in the Coriolis term.
_DM_STEP = 1e-6


@dataclass(frozen=True)
class SwimmerParams:
    """Masses, inertias, stiffness, rest angle, damping/drag, drive."""

    M1: float = 1.0
    M2: float = 1.0
    I1: float = 1.0
    I2: float = 1.0
    k: float = 1.0
    theta_bar: float = math.pi / 2.0
    c_B: float = 0.5
    c_t: float = 1.0
    c_n: float = 2.0
    L1: float = 1.0
    L2: float = 1.0
    eps: float = 0.0
    T_f: float = TWO_PI

    def __post_init__(self):
        for name in ("M1", "M2", "I1", "I2", "k", "c_B", "c_t", "c_n", "L1", "L2", "T_f"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be strictly positive")
        if self.c_n < self.c_t:
            raise ValueError("resistive drag requires c_n >= c_t")
        if self.eps < 0.0:
            raise ValueError("eps must be nonnegative")


@dataclass(frozen=True)
class SwimmerState:
    """Typed view of the 8-vector state; angles normalized on output."""

    phi1: float
    phi2: float
    x: float
    y: float
    dphi1: float
    dphi2: float
    dx: float
    dy: float

    def __post_init__(self):
        values = [self.phi1, self.phi2, self.x, self.y, self.dphi1, self.dphi2, self.dx, self.dy]
        if not all(math.isfinite(v) for v in values):
            raise ValueError("state components must be finite")
        object.__setattr__(self, "phi1", wrap_angle(self.phi1))
        object.__setattr__(self, "phi2", wrap_angle(self.phi2))

    @staticmethod
    def from_array(state) -> "SwimmerState":
        return SwimmerState(*(float(v) for v in state))

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.phi1, self.phi2, self.x, self.y, self.dphi1, self.dphi2, self.dx, self.dy]
        )


@dataclass(frozen=True)
class EnergyReport:
    kinetic: float
    potential: float
    total: float
    dissipation_rate: float


def mass_matrix(q, p: SwimmerParams) -> np.ndarray:
    """Kinetic-energy metric M(q) with 2K = qdot' M(q) qdot, rows (phi1, phi2, x, y)."""
    s1, c1 = math.sin(q[0]), math.cos(q[0])
    s2, c2 = math.sin(q[1]), math.cos(q[1])
    m = np.zeros((4, 4))
    m[0, 0] = p.I1 + p.M1
    m[1, 1] = p.I2 + p.M2
    m[2, 2] = m[3, 3] = p.M1 + p.M2
    m[0, 2] = m[2, 0] = -p.M1 * s1
    m[0, 3] = m[3, 0] = p.M1 * c1
    m[1, 2] = m[2, 1] = -p.M2 * s2
    m[1, 3] = m[3, 1] = p.M2 * c2
    return m


def coriolis(q, dq, p: SwimmerParams) -> np.ndarray:
    """Velocity quadratic term c(q, qdot) = Mdot qdot - 1/2 d(qdot' M qdot)/dq.

    For this metric the angle rows cancel identically and only centrifugal
    terms on the hinge survive; coriolis_fd recovers the same vector from
    finite differences of the mass matrix.
    """
    a1 = p.M1 * dq[0] * dq[0]
    a2 = p.M2 * dq[1] * dq[1]
    return np.array(
        [
            0.0,
            0.0,
            -a1 * math.cos(q[0]) - a2 * math.cos(q[1]),
            -a1 * math.sin(q[0]) - a2 * math.sin(q[1]),
        ]
    )


def coriolis_fd(q, dq, p: SwimmerParams, step: float = _DM_STEP) -> np.ndarray:
    """Coriolis vector from central differences of the mass matrix.

    Roundoff in the differenced trig entries leaves ~1e-10 noise at the
    default step, which is why the closed form above is the production path.
    """
    c = np.zeros(4)
    mdot = np.zeros((4, 4))
    for idx in (0, 1):
        qp = np.array(q, dtype=float)
        qm = np.array(q, dtype=float)
        qp[idx] += step
        qm[idx] -= step
        dmk = (mass_matrix(qp, p) - mass_matrix(qm, p)) / (2.0 * step)
        mdot += dmk * dq[idx]
        c[idx] = -0.5 * float(dq @ dmk @ dq)
    return c + mdot @ dq


def potential(q, p: SwimmerParams) -> float:
    # The interior angle lives on the circle: wrap the spring error so the
    # potential is well-defined under the renormalization in act_config.
    d = wrap_angle(q[0] - q[1] - p.theta_bar)
    return 0.5 * p.k * d * d


def potential_grad(q, p: SwimmerParams) -> np.ndarray:
    g = p.k * wrap_angle(q[0] - q[1] - p.theta_bar)
    return np.array([g, -g, 0.0, 0.0])


def kinetic_energy(q, dq, p: SwimmerParams) -> float:
    k = 0.0
    for phi, dphi, mass, inertia in ((q[0], dq[0], p.M1, p.I1), (q[1], dq[1], p.M2, p.I2)):
        s, c = math.sin(phi), math.cos(phi)
        vx = dq[2] - s * dphi
        vy = dq[3] + c * dphi
        k += 0.5 * inertia * dphi * dphi + 0.5 * mass * (vx * vx + vy * vy)
    return k


def lagrangian(q, dq, p: SwimmerParams) -> float:
    return kinetic_energy(q, dq, p) - potential(q, p)


def shape_force(dq, p: SwimmerParams) -> np.ndarray:
    """Joint damper -c_B thetadot dtheta; dissipates power c_B thetadot^2."""
    f = -p.c_B * (dq[0] - dq[1])
    return np.array([f, -f, 0.0, 0.0])


def drag_force(q, dq, p: SwimmerParams) -> np.ndarray:
    """Resistive drag integrated along each link from the hinge.

    The force density at arclength s is -(c_t t t' + c_n n n') v(s) with v(s)
    affine in s, so the rod integral reduces to the 0th/1st/2nd moments of s.
    Generalized forces follow by virtual work.
    """
    out = np.zeros(4)
    for idx, (phi, dphi, length) in enumerate(
        ((q[0], dq[0], p.L1), (q[1], dq[1], p.L2))
    ):
        s, c = math.sin(phi), math.cos(phi)
        vt = c * dq[2] + s * dq[3]
        vn = -s * dq[2] + c * dq[3]
        m1 = 0.5 * length * length
        m2 = length**3 / 3.0
        ft = -p.c_t * length * vt
        fn = -p.c_n * (length * vn + m1 * dphi)
        out[idx] += -p.c_n * (m1 * vn + m2 * dphi)
        out[2] += ft * c - fn * s
        out[3] += ft * s + fn * c
    return out


def swim_force(t: float, p: SwimmerParams) -> np.ndarray:
    """Periodic internal joint torque eps*sin(2 pi t / T_f) dtheta."""
    a = p.eps * math.sin(TWO_PI * t / p.T_f)
    return np.array([a, -a, 0.0, 0.0])


def applied_force(q, dq, t: float, p: SwimmerParams) -> np.ndarray:
    return shape_force(dq, p) + drag_force(q, dq, p) + swim_force(t, p)


def acceleration(q, dq, t: float, p: SwimmerParams) -> np.ndarray:
    """Solve M(q) qddot = -grad U - c(q, qdot) + Q for qddot."""
    force = applied_force(q, dq, t, p) - potential_grad(q, p) - coriolis(q, dq, p)
    try:
        return np.linalg.solve(mass_matrix(q, p), force)
    except np.linalg.LinAlgError as exc:  # unreachable for positive params
        raise ValueError("singular mass matrix") from exc


def swimmer_field(p: SwimmerParams) -> SystemField:
    def rhs(state, t):
        out = np.empty(8)
        out[:4] = state[4:]
        out[4:] = acceleration(state[:4], state[4:], t, p)
        return out

    symmetry = Symmetry(
        group="SE2",
        act=tangent_act,
        act_tangent=lambda z, state, v: tangent_act_linear(z, v),
    )
    return SystemField(
        dimension=8, rhs=rhs, period=p.T_f, symmetry=symmetry, state_names=STATE_NAMES
    )


def energy(q, dq, p: SwimmerParams) -> EnergyReport:
    """Generalized energy E = K + U and the instantaneous dissipative power."""
    kin = kinetic_energy(q, dq, p)
    pot = potential(q, p)
    diss = float((shape_force(dq, p) + drag_force(q, dq, p)) @ dq)
    return EnergyReport(kinetic=kin, potential=pot, total=kin + pot, dissipation_rate=diss)


def total_power(q, dq, t: float, p: SwimmerParams) -> float:
    """Power of all applied forces, drive included; equals dE/dt on solutions."""
    return float(applied_force(q, dq, t, p) @ dq)


def energy_rate_residual(traj, p: SwimmerParams) -> float:
    """Max |dE/dt - <F, qdot>| along a trajectory.

    dE/dt comes from differencing the sampled energy: a 4th-order central
    stencil on uniform grids, a second-order three-point formula otherwise.
    """
    times = traj.times
    n = len(times)
    if n < 5:
        raise ValueError("trajectory too short for an energy-rate check")
    e_vals = np.array([energy(s[:4], s[4:], p).total for s in traj.states])
    p_vals = np.array(
        [total_power(s[:4], s[4:], t, p) for s, t in zip(traj.states, times)]
    )
    dt = np.diff(times)
    if np.allclose(dt, dt[0], rtol=1e-8, atol=0.0):
        h = dt[0]
        dedt = (e_vals[:-4] - 8.0 * e_vals[1:-3] + 8.0 * e_vals[3:-1] - e_vals[4:]) / (12.0 * h)
        return float(np.max(np.abs(dedt - p_vals[2:-2])))
    h1 = dt[:-1]
    h2 = dt[1:]
    dedt = (
        -h2 / (h1 * (h1 + h2)) * e_vals[:-2]
        + (h2 - h1) / (h1 * h2) * e_vals[1:-1]
        + h1 / (h2 * (h1 + h2)) * e_vals[2:]
    )
    return float(np.max(np.abs(dedt - p_vals[1:-1])))


def rest_reduced(p: SwimmerParams) -> np.ndarray:
    """Reduced equilibrium: rest shape, zero shape and body velocities."""
    return np.array([p.theta_bar, 0.0, 0.0, 0.0, 0.0])


def rest_state(p: SwimmerParams) -> np.ndarray:
    """Identity-frame equilibrium of the unforced swimmer."""
    return swimmer_chart().representative(rest_reduced(p))


def swimmer_chart() -> QuotientChart:
    """SE(2) quotient with frame (phi1, x, y).

    The identity frame puts link 1 along the x-axis with the hinge at the
    origin; reduced coordinates are (theta, thetadot, omega, v1, v2).
    """

    def project(state):
        c, s = math.cos(state[0]), math.sin(state[0])
        return np.array(
            [
                wrap_angle(state[0] - state[1]),
                state[4] - state[5],
                state[4],
                c * state[6] + s * state[7],
                -s * state[6] + c * state[7],
            ]
        )

    def representative(r):
        theta, dtheta, omega, v1, v2 = (float(v) for v in r)
        return np.array([0.0, -theta, 0.0, 0.0, omega, omega - dtheta, v1, v2])

    def frame_of(state):
        return SE2Element(state[0], state[2], state[3])

    def tangent_project(state, v):
        c, s = math.cos(state[0]), math.sin(state[0])
        v1 = c * state[6] + s * state[7]
        v2 = -s * state[6] + c * state[7]
        return np.array(
            [
                v[0] - v[1],
                v[4] - v[5],
                v[4],
                v2 * v[0] + c * v[6] + s * v[7],
                -v1 * v[0] - s * v[6] + c * v[7],
            ]
        )

    def body_velocity(r, t):
        return np.array([r[2], r[3], r[4]])

    return QuotientChart(
        group="SE2",
        reduced_dim=5,
        project=project,
        representative=representative,
        frame_of=frame_of,
        tangent_project=tangent_project,
        body_velocity=body_velocity,
        act=tangent_act,
    )
