"""Acceptance suite: one test per shipped criterion, tolerances pinned.

Criteria 6 and 7 share one 200 000-trajectory simulation (module fixture).
Each test ends by printing a single PASS line (visible with -v/-s).
"""
import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from persistent_ruin import ModelParams, homogeneous_params, params_from_eta
from persistent_ruin.fib import StrataTables
from persistent_ruin.genfun import GenFunCalc, k_infinity
from persistent_ruin.limits import (limit_params, phi_hat, special_phi_hat,
                                    xcal_cf, joint_cf_homog, invert_cf)
from persistent_ruin.oracle import enum_excursions, symmetry_check
from persistent_ruin.ring import SeriesRing, PointRing
from persistent_ruin.ruin import pi_value, rho, rho_oracle, prob_height_le_N
from persistent_ruin.simulate import (simulate_batch, stats_from_steps,
                                      scaled_statistic, empirical_cf)

ONE = Fraction(1)


@pytest.fixture(scope="module")
def big_sim():
    p = params_from_eta(Fraction(1, 4), Fraction(3, 4), 0.25, 100)
    return p, simulate_batch(p, 200_000, seed=20240901)


def done(n, text):
    print(f"PASS criterion {n}: {text}")


def test_criterion_01_exact_distribution_vs_enumeration():
    for p in (ModelParams(Fraction(1, 3), Fraction(3, 5), 3, 5),
              homogeneous_params(Fraction(1, 2), 5, f=3)):
        ring = SeriesRing(max_degree=16)
        kn = GenFunCalc(p, ring).k_n() * prob_height_le_N(p)
        cells = enum_excursions(p, 16, height_cap=p.N).marginal_rvl()
        for key in set(kn.coeffs) | set(cells):
            assert kn.coeffs.get(key, Fraction(0)) == cells.get(key, Fraction(0)), (p.a, key)
    done(1, "excursion distribution equals path enumeration for all L <= 16, exact")


def test_criterion_02_passage_probabilities_vs_absorbing_chain():
    grid = [ModelParams(Fraction(1, 3), Fraction(3, 5), 3, 9),    # a < b
            ModelParams(Fraction(2, 5), Fraction(2, 5), 4, 10),   # a = b
            ModelParams(Fraction(3, 5), Fraction(1, 3), 3, 9)]    # a > b
    for p in grid:
        for m in range(0, p.N + 1):
            for n in range(0, p.N + 1):
                if m != n:
                    assert rho(m, n, p) == rho_oracle(m, n, p), (p.a, p.b, m, n)
    done(2, "closed-form passage probabilities equal the absorbing-chain solve, exact")


def test_criterion_03_identity_suite():
    ring = SeriesRing(max_degree=10)
    grid = [ModelParams(Fraction(1, 3), Fraction(3, 5), 3, 8),
            ModelParams(Fraction(3, 5), Fraction(1, 3), 4, 9),
            ModelParams(Fraction(1, 2), Fraction(1, 2), 3, 8)]
    r, z = ring.r, ring.z
    for p in grid:
        a, b, f, N = p.a, p.b, p.f, p.N
        tab = StrataTables(p, ring)
        x_a, beta_a = tab.homog_coeffs(a)
        x_b, _ = tab.homog_coeffs(b)
        x_ab, _ = tab.mixed_coeffs(a, b)
        lead = r * r * z**4
        # second-order reduction of the three-term recurrence
        w = [tab.wstar(n, a) for n in range(7)]
        for n in range(2, 6):
            val = w[n + 1] * w[n - 1] - w[n] * w[n]
            assert val == x_a ** (n - 1) * (w[2] * w[0] - w[1] * w[1])
            assert val * beta_a == x_a ** (n - 1) * (w[3] * w[0] - w[2] * w[1])
        # interlacing lemma, homogeneous
        for n in range(2, 7):
            assert (tab.wstar(n, a) ** 2 - tab.wstar(n + 1, a) * tab.wstar(n - 1, a)
                    == a * a * (1 - a) ** 2 * lead * x_a ** (n - 2))
        # symmetry of the stratified denominators
        for m in range(0, N):
            for n in range(m + 1, N + 1):
                assert tab.wbar(m, n) == tab.wbar(n - 1, m - 1)
        # interlacing brackets, all five stratified cases
        for ell in range(2, f + 1):
            for j in range(1, N - f):
                assert tab.bracket_w(f - ell, f + j) == (
                    a * a * lead * (1 - a) * (1 - b)
                    * x_a ** (ell - 2) * x_ab * x_b ** (j - 1))
            assert tab.bracket_w(f - ell, f) == (
                a * a * lead * (1 - a) * (1 - b) * x_a ** (ell - 2))
        for j in range(1, N - f):
            assert tab.bracket_w(f - 1, f + j) == (
                b * b * lead * (1 - a) * (1 - b) * x_b ** (j - 1))
        for m in range(0, f - 3):
            for ell in range(2, f - m):
                assert tab.bracket_w(m, m + ell) == (
                    a * a * lead * (1 - a) ** 2 * x_a ** (ell - 2))
        for m in range(f, N - 2):
            for j in range(2, N - m):
                assert tab.bracket_w(m, m + j) == (
                    b * b * lead * (1 - b) ** 2 * x_b ** (j - 2))
        # numerator/denominator brackets, all three cases
        for n in range(1, f - 1):
            assert tab.bracket_wq(n) == a * a * z * z * x_a ** (n - 1)
        assert tab.bracket_wq(f - 1) == (
            Fraction(1 - b, 1 - a) * a * a * z * z * x_a ** (f - 2))
        for j in range(1, N - f):
            assert tab.bracket_wq(f + j - 1) == (
                Fraction(1 - b, 1 - a) * a * a * z * z
                * x_a ** (f - 2) * x_ab * x_b ** (j - 1))
        # evaluation at (1, 1, 1)
        t1 = StrataTables(p, PointRing(ONE, ONE, ONE))
        for ell in range(1, 6):
            assert t1.qstar(ell, a) == ell * a ** (ell - 1)
            assert t1.wstar(ell, a) == a ** (ell - 1) * (ell - (ell - 1) * a)
        for ell in range(1, f + 1):
            for j in range(1, N - f + 1):
                assert t1.wbar(f - ell, f + j) == (
                    a**ell * b ** (j - 1) * pi_value(f - ell, f + j, p))
        # the first-passage prefactor as a ratio of denominators
        calc = GenFunCalc(p, ring)
        for m in range(0, 3):
            for n in range(m + 2, min(m + 5, N) + 1):
                assert calc.lambda_factor(m, n) == calc.lambda_factor_def(m, n)
    done(3, "recurrence/bracket/evaluation identity suite holds exactly on the grid")


def test_criterion_04_runs_symmetry():
    for a in (Fraction(1, 3), Fraction(1, 4), Fraction(2, 5)):
        ok, failures = symmetry_check(a, 5)
        assert ok, (a, failures[:3])
    done(4, "runs/steps reflection law exact for all cells 2 <= n <= 5")


def test_criterion_05_k_difference_identity():
    a = Fraction(1, 2)
    rng = np.random.default_rng(12345)
    for _ in range(10):
        pu, pr, pz = rng.uniform(0, 2 * math.pi, size=3)
        u, r, z = cmath.exp(1j * pu), cmath.exp(1j * pr), cmath.exp(1j * pz)
        lhs = (k_infinity(a, (r * u, 1 / u, z))
               - k_infinity(a, (u / r, 1 / u, r * z)))
        rhs = z * z * (r * r - 1) / 2
        assert abs(lhs - rhs) < 1e-10
    done(5, "barrier-free gf difference identity holds at 10 unit-modulus points")


def test_criterion_06_meander_cf(big_sim):
    p, batch = big_sim
    lp = limit_params(float(p.a), float(p.b), 0.25)
    x = scaled_statistic(batch, p, "X")
    for t in (-2.0, -1.0, 1.0, 2.0):
        val, _ = empirical_cf(x, t)
        assert abs(val - phi_hat(t, lp)) < 0.05, t
    done(6, "meander statistic cf matches the limit law within 0.05 at t in {-2,-1,1,2}")


def test_criterion_07_pre_meander_cf(big_sim):
    p, batch = big_sim
    lp = limit_params(float(p.a), float(p.b), 0.25)
    x = scaled_statistic(batch, p, "Xcal")
    for t in (-1.0, 1.0):
        val, _ = empirical_cf(x, t)
        assert abs(val - xcal_cf(t, lp)) < 0.05, t
    done(7, "pre-meander statistic cf matches the limit law within 0.05 at t = +-1")


def test_criterion_08_density_inversion():
    a = 0.25
    sigma = math.sqrt(1 - 3 * a + 3 * a * a)
    xs = np.linspace(-12.0, 8.0, 2001)
    grid = invert_cf(lambda t: special_phi_hat(t, a), xs, decay_rate=sigma)
    assert abs(grid.mean - (-0.25)) < 1e-5
    assert abs(grid.argmax - (-0.131619)) < 1e-3
    cf = lambda t: np.where(t == 0, 1.0, t / np.sinh(np.where(t == 0, 1.0, t)))
    xs2 = np.linspace(-3.0, 3.0, 241)
    grid2 = invert_cf(cf, xs2, T=40.0)
    err = np.max(np.abs(grid2.values - (np.pi / 4) / np.cosh(np.pi * xs2 / 2) ** 2))
    assert err < 1e-6
    done(8, "density inversion: mean -0.25 +- 1e-5, mode -0.131619 +- 1e-3, "
            "sech^2 recovered to 1e-6")


def test_criterion_09_trajectory_replay():
    steps = [-1, -1, 1, 1, -1, 1, 1, 1, 1, -1, -1, -1,
             -1, -1, 1, -1, 1, 1, 1, 1, 1, -1, 1, 1]
    ts = stats_from_steps(steps, 4)
    assert ts.excursions == 4
    assert (ts.last_visit.runs, ts.last_visit.short_runs,
            ts.last_visit.steps) == (10, 4, 18)
    assert (ts.meander.runs, ts.meander.short_runs,
            ts.meander.steps) == (3, 1, 6)
    done(9, "hand-counted 24-step trajectory replays to the exact statistics")


def test_criterion_10_homogeneous_consistency():
    ts = np.linspace(-6.0, 6.0, 40)
    for a in (0.25, 1 / 3):
        a1 = math.sqrt(a / (1 - a))
        expect_phi = a1 * ts / np.sinh(a1 * ts)
        expect_xcal = np.tanh(a1 * ts) / (a1 * ts)
        for eta in (0.2, 0.5, 0.8):
            lp = limit_params(a, a, eta)
            assert np.max(np.abs(phi_hat(ts, lp) - expect_phi)) < 1e-12
            assert np.max(np.abs(xcal_cf(ts, lp) - expect_xcal)) < 1e-12
        diag = np.array([joint_cf_homog(t, t, a) for t in ts])
        assert np.max(np.abs(diag - ts / np.sinh(ts))) < 1e-12
    done(10, "homogeneous reductions of the limit cfs agree to 1e-12")
