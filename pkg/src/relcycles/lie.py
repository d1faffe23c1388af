"""SE(2) and R^n translation groups: elements, algebras, and their actions.

Group elements are immutable value types stored as (angle, vector) pairs
rather than homogeneous matrices; 3x3 matrices appear only as test oracles.
Rotation angles are renormalized to (-pi, pi] after every operation so that
long composition chains cannot drift out of range.

The planar actions operate on the two-link body's coordinates: a
configuration is the 4-vector (phi1, phi2, x, y) and a full state is the
8-vector (phi1, phi2, x, y, dphi1, dphi2, dx, dy).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


class BranchPointError(ValueError):
    """log() is undefined at a rotation by exactly pi."""


def wrap_angle(theta: float) -> float:
    """Map an angle to the interval (-pi, pi]; exact on in-range values."""
    if -math.pi < theta <= math.pi:
        return theta
    return math.pi - (math.pi - theta) % TWO_PI


@dataclass(frozen=True)
class SE2Element:
    """A planar rotation by ``theta`` followed by a translation (tx, ty)."""

    theta: float
    tx: float
    ty: float

    def __post_init__(self):
        object.__setattr__(self, "theta", wrap_angle(float(self.theta)))
        object.__setattr__(self, "tx", float(self.tx))
        object.__setattr__(self, "ty", float(self.ty))

    @staticmethod
    def identity() -> "SE2Element":
        return SE2Element(0.0, 0.0, 0.0)

    def compose(self, other: "SE2Element") -> "SE2Element":
        """Group product; the result acts as ``self`` after ``other``."""
        c, s = math.cos(self.theta), math.sin(self.theta)
        return SE2Element(
            self.theta + other.theta,
            self.tx + c * other.tx - s * other.ty,
            self.ty + s * other.tx + c * other.ty,
        )

    def inverse(self) -> "SE2Element":
        c, s = math.cos(self.theta), math.sin(self.theta)
        return SE2Element(-self.theta, -(c * self.tx + s * self.ty), s * self.tx - c * self.ty)

    def apply(self, point) -> np.ndarray:
        """Act on a point of the plane."""
        c, s = math.cos(self.theta), math.sin(self.theta)
        return np.array([c * point[0] - s * point[1] + self.tx, s * point[0] + c * point[1] + self.ty])


@dataclass(frozen=True)
class SE2Algebra:
    """Body velocity (angular rate, linear rates)."""

    omega: float
    vx: float
    vy: float


def compose(g1: SE2Element, g2: SE2Element) -> SE2Element:
    return g1.compose(g2)


def exp(xi: SE2Algebra, t: float = 1.0) -> SE2Element:
    """SE(2) exponential: rotate at rate omega for time t while translating.

    The translation is the integral of the rotating linear velocity, which is
    closed-form; a two-term series covers the small-angle limit.
    """
    alpha = xi.omega * t
    if abs(alpha) < 1e-8:
        s = t * (1.0 - alpha * alpha / 6.0)
        c = t * (alpha / 2.0 - alpha**3 / 24.0)
    else:
        s = math.sin(alpha) / xi.omega
        c = (1.0 - math.cos(alpha)) / xi.omega
    return SE2Element(alpha, s * xi.vx - c * xi.vy, c * xi.vx + s * xi.vy)


def log(g: SE2Element) -> SE2Algebra:
    """Inverse of exp at t = 1; requires |theta| < pi."""
    alpha = g.theta
    if abs(abs(alpha) - math.pi) < 1e-12:
        raise BranchPointError("log is ambiguous at a rotation by pi")
    if abs(alpha) < 1e-8:
        s = 1.0 - alpha * alpha / 6.0
        c = alpha / 2.0 - alpha**3 / 24.0
    else:
        s = math.sin(alpha) / alpha
        c = (1.0 - math.cos(alpha)) / alpha
    det = s * s + c * c
    return SE2Algebra(alpha, (s * g.tx + c * g.ty) / det, (-c * g.tx + s * g.ty) / det)


@dataclass(frozen=True)
class TranslationElement:
    """Element of the abelian group (R^n, +)."""

    shift: tuple

    def __post_init__(self):
        object.__setattr__(self, "shift", tuple(float(v) for v in self.shift))

    @staticmethod
    def identity(n: int) -> "TranslationElement":
        return TranslationElement((0.0,) * n)

    def compose(self, other: "TranslationElement") -> "TranslationElement":
        return TranslationElement(tuple(a + b for a, b in zip(self.shift, other.shift)))

    def inverse(self) -> "TranslationElement":
        return TranslationElement(tuple(-a for a in self.shift))


def act_config(z: SE2Element, q) -> np.ndarray:
    """Act on a two-link configuration (phi1, phi2, x, y).

    Both link angles shift by the rotation angle and the hinge position is
    rotated and translated; angles are renormalized.
    """
    c, s = math.cos(z.theta), math.sin(z.theta)
    return np.array(
        [
            wrap_angle(q[0] + z.theta),
            wrap_angle(q[1] + z.theta),
            c * q[2] - s * q[3] + z.tx,
            s * q[2] + c * q[3] + z.ty,
        ]
    )


def tangent_act(z: SE2Element, state) -> np.ndarray:
    """Lift act_config to the 8-dim state (q, qdot).

    Angle rates are unchanged and the hinge velocity rotates with the frame.
    """
    c, s = math.cos(z.theta), math.sin(z.theta)
    out = np.empty(8)
    out[:4] = act_config(z, state[:4])
    out[4] = state[4]
    out[5] = state[5]
    out[6] = c * state[6] - s * state[7]
    out[7] = s * state[6] + c * state[7]
    return out


def tangent_act_linear(z: SE2Element, v) -> np.ndarray:
    """Apply the state-Jacobian of tangent_act to a tangent 8-vector.

    The lifted action is affine in the state, so its Jacobian is constant:
    angle components pass through, planar components rotate.
    """
    c, s = math.cos(z.theta), math.sin(z.theta)
    out = np.empty(8)
    out[0] = v[0]
    out[1] = v[1]
    out[2] = c * v[2] - s * v[3]
    out[3] = s * v[2] + c * v[3]
    out[4] = v[4]
    out[5] = v[5]
    out[6] = c * v[6] - s * v[7]
    out[7] = s * v[6] + c * v[7]
    return out
