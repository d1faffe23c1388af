"""Low-dimensional worked systems.

``spring_field``: a forced, damped unit mass-spring written first-order,
    d(x, y)/dt = (y, -x - y + eps*sin t).

``three_d_field``: the same oscillator driving a third coordinate,
    dz/dt = y - x^2 - x*y + eps*cos t,
which never feeds back; the system is invariant under translations in z and
its quotient by that symmetry is exactly ``spring_field``.
"""

from __future__ import annotations

import math

import numpy as np

from ..dynamics import Symmetry, SystemField
from ..lie import TWO_PI, TranslationElement
from ..reduction import QuotientChart


def spring_field(eps: float) -> SystemField:
    def rhs(state, t):
        x, y = state
        return np.array([y, -x - y + eps * math.sin(t)])

    return SystemField(dimension=2, rhs=rhs, period=TWO_PI, state_names=("x", "y"))


def _shift_z(g: TranslationElement, state) -> np.ndarray:
    out = np.array(state, dtype=float)
    out[2] += g.shift[0]
    return out


def three_d_field(eps: float) -> SystemField:
    def rhs(state, t):
        x, y, _ = state
        return np.array(
            [y, -x - y + eps * math.sin(t), y - x * x - x * y + eps * math.cos(t)]
        )

    symmetry = Symmetry(
        group="translation",
        act=_shift_z,
        act_tangent=lambda g, state, v: np.array(v, dtype=float),
    )
    return SystemField(
        dimension=3, rhs=rhs, period=TWO_PI, symmetry=symmetry, state_names=("x", "y", "z")
    )


def three_d_chart(eps: float) -> QuotientChart:
    """Quotient of the 3-d system by z-translations: reduced state (x, y)."""

    def body_velocity(r, t):
        x, y = r
        return np.array([y - x * x - x * y + eps * math.cos(t)])

    return QuotientChart(
        group="translation",
        reduced_dim=2,
        project=lambda state: np.array(state[:2], dtype=float),
        representative=lambda r: np.array([r[0], r[1], 0.0]),
        frame_of=lambda state: TranslationElement((state[2],)),
        tangent_project=lambda state, v: np.array(v[:2], dtype=float),
        body_velocity=body_velocity,
        act=_shift_z,
    )
