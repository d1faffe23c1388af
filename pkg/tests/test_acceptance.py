"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
lines on passing runs as well.
"""

import math
import time

import numpy as np

import relcycles as rc
from relcycles import models

from conftest import random_se2
from test_swimmer import _euler_lagrange_acceleration

TWO_PI = 2.0 * math.pi
EXP_MINUS_PI = math.exp(-math.pi)


class Criterion:
    def __init__(self, number, title):
        self.number = number
        self.title = title
        self.checks = []

    def check(self, ok, detail):
        self.checks.append((bool(ok), detail))

    def finish(self):
        ok = all(c for c, _ in self.checks)
        detail = "; ".join(d for _, d in self.checks)
        print(f"[criterion {self.number}] {'PASS' if ok else 'FAIL'}: {self.title} ({detail})")
        failed = "; ".join(d for c, d in self.checks if not c)
        assert ok, f"criterion {self.number} failed: {failed}"


def test_criterion_1_spring_cycle_anchor_and_floquet():
    c = Criterion(1, "forced spring stroboscopic fixed point and multipliers")
    start = time.perf_counter()
    cert = rc.find_stroboscopic_cycle(models.spring_field(1.0), np.zeros(2), tol=1e-12)
    elapsed = time.perf_counter() - start
    anchor_err = float(np.abs(cert.anchor - [-1.0, 0.0]).max())
    mult_err = float(np.abs(np.abs(cert.multipliers) - EXP_MINUS_PI).max())
    c.check(anchor_err < 1e-6, f"anchor error {anchor_err:.2e} < 1e-6")
    c.check(mult_err < 1e-4, f"multiplier magnitude error {mult_err:.2e} < 1e-4")
    c.check(elapsed < 1.0, f"runtime {elapsed:.2f}s < 1s")
    c.finish()


def test_criterion_2_spring_sweep_amplitudes():
    c = Criterion(2, "sweep cycle amplitude equals the forcing amplitude")
    grid = [0.01, 0.1, 0.5, 1.0]
    certs = rc.persistence_sweep(models.spring_field, grid, np.zeros(2), tol=1e-12)
    c.check(len(certs) == len(grid), f"{len(certs)}/{len(grid)} entries converged")
    worst = 0.0
    for cert in certs:
        samples = rc.sample_cycle(models.spring_field(cert.epsilon), cert, n=512)
        amplitude = float(np.max(np.linalg.norm(samples, axis=1)))
        worst = max(worst, abs(amplitude - cert.epsilon))
    c.check(worst < 1e-6, f"max |amplitude - eps| {worst:.2e} < 1e-6")
    c.finish()


def test_criterion_3_three_d_phase_and_iterates():
    c = Criterion(3, "per-period z shift and the phase-iterate property")
    field = models.three_d_field(1.0)
    chart = models.three_d_chart(1.0)
    cert = rc.find_relative_cycle(field, chart, np.zeros(2), tol=1e-12)
    shift = cert.phase.group_element.shift[0]
    c.check(abs(shift + math.pi) < 1e-3, f"|z-shift + pi| {abs(shift + math.pi):.2e} < 1e-3")

    x0 = chart.representative(cert.anchor)
    x = x0.copy()
    ctrl = rc.FixedStep(TWO_PI / 2048.0)
    worst = 0.0
    for k in range(1, 6):
        x = rc.integrate(field, x, (k - 1) * TWO_PI, k * TWO_PI, ctrl).final
        worst = max(worst, float(np.linalg.norm(x - (x0 + [0.0, 0.0, k * shift]))))
    c.check(worst < 1e-5, f"max iterate residual (k=1..5) {worst:.2e} < 1e-5")
    c.finish()


def test_criterion_4_reduced_field_identification():
    c = Criterion(4, "reduced 3-d field equals the spring field pointwise")
    rng = np.random.default_rng(0)
    worst = 0.0
    for eps in (0.0, 1.0):
        rfield = rc.reduced_field(models.three_d_field(eps), models.three_d_chart(eps))
        spring = models.spring_field(eps)
        for _ in range(500):
            r = rng.uniform(-3.0, 3.0, 2)
            t = rng.uniform(0.0, 10.0)
            worst = max(worst, float(np.abs(rfield.rhs(r, t) - spring.rhs(r, t)).max()))
    c.check(worst < 1e-12, f"max pointwise difference {worst:.2e} < 1e-12 on 1000 states")
    c.finish()


def test_criterion_5_unforced_swimmer_dissipates_to_rest():
    c = Criterion(5, "unforced swimmer: monotone energy, power identity, rest shape")
    p = models.SwimmerParams()
    field = models.swimmer_field(p)
    rng = np.random.default_rng(2024)
    for trial in range(3):
        x0 = np.concatenate(
            [rng.uniform(-np.pi, np.pi, 2), rng.uniform(-1.0, 1.0, 2), rng.uniform(-0.5, 0.5, 4)]
        )
        start = time.perf_counter()
        traj = rc.integrate(field, x0, 0.0, 100.0, rc.FixedStep(0.005))
        energies = np.array([models.energy(s[:4], s[4:], p).total for s in traj.states])
        residual = models.energy_rate_residual(traj, p)
        elapsed = time.perf_counter() - start
        slack = 1e-12 * np.maximum(1.0, np.abs(energies[:-1]))
        monotone = bool(np.all(np.diff(energies) <= slack))
        vnorm = float(np.linalg.norm(traj.final[4:]))
        shape_err = abs(rc.wrap_angle(traj.final[0] - traj.final[1]) - p.theta_bar)
        c.check(monotone, f"run {trial}: energy monotone nonincreasing")
        c.check(residual < 1e-6, f"run {trial}: power residual {residual:.2e} < 1e-6")
        c.check(shape_err < 1e-4, f"run {trial}: |theta - theta_bar| {shape_err:.2e} < 1e-4")
        c.check(vnorm < 1e-6, f"run {trial}: final velocity norm {vnorm:.2e} < 1e-6")
        c.check(elapsed < 10.0, f"run {trial}: runtime {elapsed:.1f}s < 10s")
    c.finish()


def test_criterion_6_swimmer_symmetry():
    c = Criterion(6, "swimmer equivariance, invariance, and reduction round trip")
    p = models.SwimmerParams(eps=0.2)
    field = models.swimmer_field(p)
    chart = models.swimmer_chart()
    rng = np.random.default_rng(7)

    samples = rng.uniform(-1.0, 1.0, size=(10, 8))
    worst_eq = max(
        rc.equivariance_residual(field, random_se2(rng), samples, t=0.37) for _ in range(100)
    )
    c.check(worst_eq < 1e-9, f"equivariance residual {worst_eq:.2e} < 1e-9")

    worst_lag = 0.0
    for _ in range(100):
        z = random_se2(rng)
        s = rng.uniform(-1.0, 1.0, 8)
        zs = rc.tangent_act(z, s)
        worst_lag = max(
            worst_lag,
            abs(models.lagrangian(zs[:4], zs[4:], p) - models.lagrangian(s[:4], s[4:], p)),
        )
    c.check(worst_lag < 1e-10, f"Lagrangian invariance {worst_lag:.2e} < 1e-10")

    x0 = np.array([0.2, -1.2, 0.3, -0.4, 0.1, -0.05, 0.2, 0.1])
    h = 0.005
    full = rc.integrate(field, x0, 0.0, 10.0, rc.FixedStep(h))
    reduced = rc.integrate(
        rc.reduced_field(field, chart), chart.project(x0), 0.0, 10.0, rc.FixedStep(h)
    )
    rebuilt = rc.reconstruct(reduced, chart, chart.frame_of(x0))
    rt_err = float(np.max(np.linalg.norm(full.states - rebuilt.states, axis=1)))
    c.check(rt_err < 1e-6, f"round-trip error {rt_err:.2e} < 1e-6 over 10 time units")
    c.finish()


def test_criterion_7_mass_matrix_and_assembler():
    c = Criterion(7, "mass matrix oracle, SPD, and Euler-Lagrange agreement")
    p = models.SwimmerParams()
    got = models.mass_matrix(np.zeros(4), p)
    want = np.array(
        [[2.0, 0.0, 0.0, 1.0], [0.0, 2.0, 0.0, 1.0], [0.0, 0.0, 2.0, 0.0], [1.0, 1.0, 0.0, 2.0]]
    )
    oracle_err = float(np.abs(got - want).max())
    c.check(oracle_err < 1e-12, f"zero-angle oracle error {oracle_err:.2e} < 1e-12")

    rng = np.random.default_rng(11)
    spd = all(
        np.all(np.linalg.eigvalsh(models.mass_matrix(rng.uniform(-np.pi, np.pi, 4), p)) > 0.0)
        for _ in range(1000)
    )
    c.check(spd, "SPD on 1000 random configurations")

    pf = models.SwimmerParams(eps=0.4)
    worst = 0.0
    for _ in range(20):
        q = rng.uniform(-1.0, 1.0, 4)
        dq = rng.uniform(-1.0, 1.0, 4)
        t = rng.uniform(0.0, pf.T_f)
        worst = max(
            worst,
            float(
                np.abs(
                    models.acceleration(q, dq, t, pf) - _euler_lagrange_acceleration(q, dq, t, pf)
                ).max()
            ),
        )
    c.check(worst < 1e-6, f"assembler vs Euler-Lagrange oracle {worst:.2e} < 1e-6")
    c.finish()


def test_criterion_8_swimmer_relative_cycle():
    c = Criterion(8, "forced swimmer: stable relative cycle with translational phase")
    p = models.SwimmerParams(eps=0.1)
    field = models.swimmer_field(p)
    chart = models.swimmer_chart()
    ctrl = rc.FixedStep(p.T_f / 2000.0)

    start = time.perf_counter()
    cert = rc.find_relative_cycle(field, chart, models.rest_reduced(p), tol=1e-10, control=ctrl)
    elapsed = time.perf_counter() - start
    c.check(cert.newton_residual < 1e-10, f"Newton residual {cert.newton_residual:.2e}")
    max_mag = float(np.abs(cert.multipliers).max())
    c.check(max_mag < 1.0, f"max |multiplier| {max_mag:.3f} < 1")

    g = cert.phase.group_element
    translation = math.hypot(g.tx, g.ty)
    c.check(translation > 1e-6, f"translational phase {translation:.2e} > 1e-6")

    x0 = chart.representative(cert.anchor)
    x = x0.copy()
    gk = rc.SE2Element.identity()
    worst = 0.0
    for k in range(1, 4):
        x = rc.integrate(field, x, (k - 1) * p.T_f, k * p.T_f, ctrl).final
        gk = rc.compose(g, gk)
        worst = max(worst, float(np.linalg.norm(x - rc.tangent_act(gk, x0))))
    c.check(worst < 1e-5, f"phase-iterate residual over 3 periods {worst:.2e} < 1e-5")
    c.check(elapsed < 60.0, f"runtime {elapsed:.1f}s < 60s")
    c.finish()
