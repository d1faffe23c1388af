"""Quotient charts, reconstruction round trips, and phase shifts."""

import math

import numpy as np
import pytest

import relcycles as rc
from relcycles import models

from conftest import angle_diff, random_se2

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------- charts


def test_three_d_chart_axioms():
    chart = models.three_d_chart(0.5)
    rng = np.random.default_rng(0)
    for _ in range(100):
        r = rng.uniform(-2.0, 2.0, 2)
        assert np.array_equal(chart.project(chart.representative(r)), r)
        s = rng.uniform(-2.0, 2.0, 3)
        z = rc.TranslationElement((rng.uniform(-10.0, 10.0),))
        assert np.array_equal(chart.project(chart.act(z, s)), chart.project(s))


def test_swimmer_chart_axioms():
    chart = models.swimmer_chart()
    rng = np.random.default_rng(1)
    for _ in range(200):
        r = rng.uniform(-1.0, 1.0, 5)
        assert np.abs(chart.project(chart.representative(r)) - r).max() < 1e-15
        s = rng.uniform(-1.5, 1.5, 8)
        z = random_se2(rng)
        assert np.abs(chart.project(rc.tangent_act(z, s)) - chart.project(s)).max() < 1e-12
        # frame_of splits the state: s = frame . representative(project(s))
        rebuilt = chart.act(chart.frame_of(s), chart.representative(chart.project(s)))
        assert angle_diff(rebuilt[0], s[0]) < 1e-12 and angle_diff(rebuilt[1], s[1]) < 1e-12
        assert np.abs(rebuilt[2:] - s[2:]).max() < 1e-12


def test_swimmer_tangent_project_is_projection_derivative():
    chart = models.swimmer_chart()
    rng = np.random.default_rng(2)
    for _ in range(50):
        s = rng.uniform(-1.0, 1.0, 8)
        v = rng.uniform(-1.0, 1.0, 8)
        h = 1e-6
        fd = (chart.project(s + h * v) - chart.project(s - h * v)) / (2.0 * h)
        assert np.abs(chart.tangent_project(s, v) - fd).max() < 1e-7


def test_reduced_field_is_well_defined_on_orbits():
    p = models.SwimmerParams(eps=0.2)
    field = models.swimmer_field(p)
    chart = models.swimmer_chart()
    rfield = rc.reduced_field(field, chart)
    rng = np.random.default_rng(3)
    for _ in range(100):
        s = rng.uniform(-1.0, 1.0, 8)
        z = random_se2(rng)
        zs = rc.tangent_act(z, s)
        a = chart.tangent_project(s, field.rhs(s, 0.2))
        b = chart.tangent_project(zs, field.rhs(zs, 0.2))
        c = rfield.rhs(chart.project(s), 0.2)
        assert np.abs(a - b).max() < 1e-10
        assert np.abs(a - c).max() < 1e-10


def test_swimmer_reduced_field_matches_full_blocks_at_representative():
    p = models.SwimmerParams(eps=0.3)
    field = models.swimmer_field(p)
    chart = models.swimmer_chart()
    rfield = rc.reduced_field(field, chart)
    rng = np.random.default_rng(4)
    for _ in range(50):
        r = rng.uniform(-0.8, 0.8, 5)
        x = chart.representative(r)
        full = field.rhs(x, 0.7)
        red = rfield.rhs(r, 0.7)
        # at the identity frame: dtheta = dphi1 - dphi2, and the omega/velocity
        # rows are accelerations plus the omega x v frame correction
        assert abs(red[0] - (full[0] - full[1])) < 1e-12
        assert abs(red[1] - (full[4] - full[5])) < 1e-12
        assert abs(red[2] - full[4]) < 1e-12
        assert abs(red[3] - (full[6] + r[2] * r[4])) < 1e-12
        assert abs(red[4] - (full[7] - r[2] * r[3])) < 1e-12


# ---------------------------------------------------------------- reconstruction


def test_reconstruct_constant_body_velocity_matches_exp():
    # chart for a pure frame integration: reduced state is the body velocity,
    # held constant, so g(t) = g0 exp(xi t)
    chart = models.swimmer_chart()
    xi = rc.SE2Algebra(0.4, 0.8, -0.3)
    times = np.linspace(0.0, 3.0, 301)
    states = np.tile([0.0, 0.0, xi.omega, xi.vx, xi.vy], (len(times), 1))
    reduced = rc.Trajectory(times, states)
    g0 = rc.SE2Element(0.3, -1.0, 2.0)
    full = rc.reconstruct(reduced, chart, g0)
    for k in (100, 200, 300):
        g_expected = rc.compose(g0, rc.exp(xi, times[k]))
        assert angle_diff(full.states[k][0], g_expected.theta) < 1e-9
        assert np.abs(full.states[k][2:4] - [g_expected.tx, g_expected.ty]).max() < 1e-9


def test_reconstruct_stationary_reduced_state_is_constant():
    chart = models.three_d_chart(0.0)
    times = np.linspace(0.0, 5.0, 51)
    states = np.zeros((len(times), 2))
    reduced = rc.Trajectory(times, states)
    full = rc.reconstruct(reduced, chart, rc.TranslationElement((1.5,)))
    assert np.abs(full.states - full.states[0]).max() < 1e-14
    assert full.states[0][2] == 1.5


@pytest.mark.parametrize("model", ["three_d", "swimmer"])
def test_projection_reconstruction_roundtrip(model):
    if model == "three_d":
        field = models.three_d_field(1.0)
        chart = models.three_d_chart(1.0)
        x0 = np.array([0.4, -0.3, 2.0])
        t_end, h = 10.0 * TWO_PI, 0.005
    else:
        field = models.swimmer_field(models.SwimmerParams(eps=0.2))
        chart = models.swimmer_chart()
        x0 = np.array([0.2, -1.2, 0.3, -0.4, 0.1, -0.05, 0.2, 0.1])
        t_end, h = 10.0 * TWO_PI, 0.005
    full = rc.integrate(field, x0, 0.0, t_end, rc.FixedStep(h))
    reduced = rc.integrate(rc.reduced_field(field, chart), chart.project(x0), 0.0, t_end, rc.FixedStep(h))
    rebuilt = rc.reconstruct(reduced, chart, chart.frame_of(x0))
    err = np.max(np.linalg.norm(full.states - rebuilt.states, axis=1))
    assert err < 1e-6


# ---------------------------------------------------------------- phase shifts


def test_three_d_phase_shift_is_minus_pi():
    field = models.three_d_field(1.0)
    chart = models.three_d_chart(1.0)
    cert = rc.find_stroboscopic_cycle(rc.reduced_field(field, chart), np.zeros(2), tol=1e-12)
    ps = rc.phase_shift(field, chart, cert.anchor, TWO_PI)
    assert abs(ps.group_element.shift[0] + math.pi) < 1e-3
    assert ps.residual < 1e-8


def test_three_d_identity_shift_at_equilibrium():
    field = models.three_d_field(0.0)
    chart = models.three_d_chart(0.0)
    ps = rc.phase_shift(field, chart, np.zeros(2), TWO_PI)
    assert abs(ps.group_element.shift[0]) < 1e-12


def test_swimmer_identity_shift_at_rest():
    p = models.SwimmerParams(eps=0.0)
    field = models.swimmer_field(p)
    chart = models.swimmer_chart()
    ps = rc.phase_shift(field, chart, models.rest_reduced(p), p.T_f)
    g = ps.group_element
    assert angle_diff(g.theta, 0.0) < 1e-12
    assert math.hypot(g.tx, g.ty) < 1e-12


def test_phase_shift_rejects_nonperiodic_anchor():
    field = models.three_d_field(1.0)
    chart = models.three_d_chart(1.0)
    with pytest.raises(rc.NotPeriodicError) as err:
        rc.phase_shift(field, chart, np.array([1.5, 1.5]), TWO_PI)
    assert err.value.residual > 1e-6


def test_three_d_iterate_property():
    field = models.three_d_field(1.0)
    chart = models.three_d_chart(1.0)
    cert = rc.find_stroboscopic_cycle(rc.reduced_field(field, chart), np.zeros(2), tol=1e-12)
    ps = rc.phase_shift(field, chart, cert.anchor, TWO_PI)
    shift = ps.group_element.shift[0]
    x0 = chart.representative(cert.anchor)
    x = x0.copy()
    ctrl = rc.FixedStep(TWO_PI / 2048.0)
    for k in range(1, 6):
        x = rc.integrate(field, x, (k - 1) * TWO_PI, k * TWO_PI, ctrl).final
        expected = x0 + np.array([0.0, 0.0, k * shift])
        assert np.linalg.norm(x - expected) < 1e-5


def test_phase_is_conjugation_consistent_translation():
    # abelian group: translated starts give exactly the same phase
    field = models.three_d_field(1.0)
    chart = models.three_d_chart(1.0)
    cert = rc.find_stroboscopic_cycle(rc.reduced_field(field, chart), np.zeros(2), tol=1e-12)
    x0 = chart.representative(cert.anchor)
    ctrl = rc.FixedStep(TWO_PI / 1024.0)
    base = None
    rng = np.random.default_rng(5)
    for _ in range(20):
        z = rc.TranslationElement((rng.uniform(-20.0, 20.0),))
        start = chart.act(z, x0)
        end = rc.integrate(field, start, 0.0, TWO_PI, ctrl).final
        shift = end[2] - start[2]
        if base is None:
            base = shift
        assert abs(shift - base) < 1e-9


def test_phase_is_conjugation_consistent_se2():
    p = models.SwimmerParams(eps=0.1)
    field = models.swimmer_field(p)
    chart = models.swimmer_chart()
    ctrl = rc.FixedStep(p.T_f / 1024.0)
    cert = rc.find_relative_cycle(field, chart, models.rest_reduced(p), tol=1e-9, control=ctrl)
    g = cert.phase.group_element
    x0 = chart.representative(cert.anchor)
    rng = np.random.default_rng(6)
    for _ in range(5):
        z = random_se2(rng)
        start = chart.act(z, x0)
        end = rc.integrate(field, start, 0.0, p.T_f, ctrl).final
        # phase from a moved start: frame(end) frame(start)^-1 = z g z^-1
        got = rc.compose(chart.frame_of(end), chart.frame_of(start).inverse())
        want = rc.compose(z, rc.compose(g, z.inverse()))
        assert angle_diff(got.theta, want.theta) < 1e-9
        assert abs(got.tx - want.tx) < 1e-9 and abs(got.ty - want.ty) < 1e-9
