"""Generating functions for first passages, excursions, meanders, last visits.

Marks: r counts runs, y counts short (length-1) runs, z counts steps.  The
``GenFunCalc`` class builds everything over a generic scalar context, so the
same closed formulas yield exact truncated series, exact rational values at
(1,1,1), or complex evaluations inside the unit polydisc.
"""
from __future__ import annotations

import cmath
from fractions import Fraction

from .fib import StrataTables
from .params import (ModelParams, StrataTooLow, gamma_turn, strata_pair_up,
                     strata_pair_down)
from .ring import PointRing, SeriesRing
from .ruin import pi_value, rho, height_tail


class BranchAmbiguity(ArithmeticError):
    """The square-root branch for the infinite-depth kernel is undecidable."""


class DivergentGeometricSum(ArithmeticError):
    """The last-visit geometric series does not converge at the given point."""


class GenFunCalc:
    """Closed-form generating functions for one model over one scalar context."""

    def __init__(self, p: ModelParams, ring=None):
        self.p = p
        self.ring = ring if ring is not None else SeriesRing()
        self.tab = StrataTables(p, self.ring)

    # -- first-passage generating functions ---------------------------------------

    def g(self, m: int, n: int):
        """Conditional gf of (runs, short runs, steps) over the passage m -> n.

        The passage is one-sided (never beyond the starting level on the far
        side) and conditioned on the first two steps pointing toward n.
        """
        p, tab = self.p, self.tab
        a, b, f = p.a, p.b, p.f
        r, z = self.ring.r, self.ring.z
        d = abs(n - m)
        if d < 2:
            raise ValueError("first-passage gf needs |n - m| >= 2")
        if min(m, n) < 0 or max(m, n) > p.N:
            raise ValueError("passage endpoints must lie in [0, N]")
        if d == 2:
            return r * z * z
        tau_a, tau_b = tab.tau(a, a), tab.tau(b, b)
        omega_a, omega_b = tab.omega(a, a), tab.omega(b, b)
        if m < n:  # upward
            if n <= f:
                scaled_pi = Fraction(a, b) * pi_value(m, n, p)
                return (omega_a / Fraction(2 - a)) * r * z**d \
                    * (a * tau_a) ** (d - 2) * scaled_pi / tab.wstar(d, a)
            if m >= f:
                return (omega_b / Fraction(2 - b)) * r * z**d \
                    * (b * tau_b) ** (d - 2) * pi_value(m, n, p) / tab.wstar(d, b)
            j = n - f
            if m == f - 1:
                return (tab.omega(a, b) / (a + b - a * b)) * r * z ** (j + 1) \
                    * (b * tau_b) ** (j - 1) * (a * pi_value(m, n, p)) / tab.wbar(m, n)
            ell = f - m
            return (omega_a / Fraction(2 - a)) * r * z ** (j + ell) \
                * tab.tau(a, b) * (a * tau_a) ** (ell - 2) * (b * tau_b) ** (j - 1) \
                * (a * pi_value(m, n, p)) / tab.wbar(m, n)
        # downward
        if m <= f - 1:
            scaled_pi = Fraction(a, b) * pi_value(m, n, p)
            return (omega_a / Fraction(2 - a)) * r * z**d \
                * (a * tau_a) ** (d - 2) * scaled_pi / tab.wstar(d, a)
        if n >= f:
            return (omega_b / Fraction(2 - b)) * r * z**d \
                * (b * tau_b) ** (d - 2) * pi_value(m, n, p) / tab.wstar(d, b)
        if n == f - 1:
            j = m - f
            return (omega_b / Fraction(2 - b)) * r * z ** (j + 1) \
                * (b * tau_b) ** (j - 1) * pi_value(m, n, p) / tab.wstar(j + 1, b)
        ell = f - n
        if m == f:
            return (tab.omega(a, b) / (a + b - a * b)) * r * z**ell \
                * (a * tau_a) ** (ell - 2) * (a * pi_value(m, n, p)) / tab.wbar(m, n)
        j = m - f
        return (omega_b / Fraction(2 - b)) * r * z ** (j + ell) \
            * tab.tau(a, b) * (a * tau_a) ** (ell - 2) * (b * tau_b) ** (j - 1) \
            * (a * pi_value(m, n, p)) / tab.wbar(m, n)

    # -- renewal factors ------------------------------------------------------------

    def lambda_factor(self, m: int, n: int):
        """Renewal factor as the interlacing ratio of stratified denominators."""
        tab = self.tab
        return (tab.wbar(m, n) * tab.wbar(m + 1, n + 1)) \
            / (tab.wbar(m, n + 1) * tab.wbar(m + 1, n))

    def lambda_factor_def(self, m: int, n: int):
        """Renewal factor from its definition (for cross-checks)."""
        p = self.p
        gm, gn = gamma_turn(m, p), gamma_turn(n, p)
        k_up = self.tab.k_kernel(*strata_pair_up(m, p))
        k_dn = self.tab.k_kernel(*strata_pair_down(n, p))
        core = 4 * gm * gn * rho(m, n, p) * rho(n, m, p) \
            * k_dn * k_up * self.g(m, n) * self.g(n, m)
        return 1 / (1 - core)

    # -- excursion generating functions -----------------------------------------------

    def excursion_gf_given_height(self, n: int):
        """Gf of (runs, short runs, steps) over an excursion of height exactly n."""
        p, tab = self.p, self.tab
        a = p.a
        r, y, z = self.ring.r, self.ring.y, self.ring.z
        if n < 1 or n > p.N:
            raise ValueError("excursion height must lie in [1, N]")
        if n == 1:
            return r * r * y * y * z * z
        if n == 2:
            return r * r * z**4 * tab.k_kernel(a, a)
        if p.f < 3:
            raise StrataTooLow(
                "excursions of height >= 3 need the lower stratum depth f >= 3")
        k_dn = tab.k_kernel(*strata_pair_down(n, p))
        return Fraction(a * (2 - a)) * z * tab.h_kernel(a, a) \
            * self.g(1, n) * k_dn * self.g(n, 0)

    def k_n(self, height_bound: int | None = None):
        """Gf of (runs, short runs, steps) over an excursion given H <= N.

        ``height_bound`` overrides N (used for the last-visit renewal, which
        conditions completed excursions on H <= N - 1).
        """
        p, tab = self.p, self.tab
        a, b, f = p.a, p.b, p.f
        N = p.N if height_bound is None else height_bound
        if N < 1:
            raise ValueError("height bound must be at least 1")
        r, z = self.ring.r, self.ring.z
        if p.homogeneous or N < f:
            c = Fraction(N - (N - 1) * a, N)
            return c * r * r * z * z * tab.qstar(N, a) / tab.wstar(N, a)
        # the constant is pinned by K[1] = 1: it equals (1-a)/P(height <= N)
        num = (N + 1 - f) * a + (f - 1) * b - (N - 1) * a * b
        den = (N + 1 - f) * a + (f - 1) * b - N * a * b
        c = (1 - a) * num / den
        return c * r * r * z * z * tab.qbar(N) / tab.wbar(1, N + 1)

    def meander_gf(self):
        """Gf of (runs, short runs, steps) over the final meander to level N."""
        p, tab = self.p, self.tab
        a = p.a
        z = self.ring.z
        if p.f < 3:
            raise StrataTooLow("the meander gf needs the lower stratum depth f >= 3")
        return Fraction(a * (2 - a)) * z * tab.h_kernel(a, a) * self.g(1, p.N)


def k_infinity(a, point, tol: float = 1e-12) -> complex:
    """Excursion gf for the homogeneous walk with no absorbing barrier.

    ``point`` is (r, y, z) inside the closed unit polydisc with z != 0, or
    exactly (1, 1, 1) where the value is 1 by normalization.
    """
    a = Fraction(a)
    r, y, z = point
    if (r, y, z) == (1, 1, 1):
        return complex(1)
    ring = PointRing(complex(r), complex(y), complex(z))
    # full-depth lower stratum: any parameters with a == b give the same kernels
    tab = StrataTables(ModelParams(a, a, 1, 2), ring)
    x_a, beta_a = tab.homog_coeffs(a)
    disc = beta_a * beta_a - 4 * x_a
    alpha = cmath.sqrt(disc)
    lo, hi = abs(beta_a - alpha), abs(beta_a + alpha)
    if abs(lo - hi) < tol * max(lo, hi, 1.0):
        raise BranchAmbiguity("cannot sort the roots |beta - alpha| vs |beta + alpha|")
    if lo > hi:
        alpha = -alpha
    return (1 - beta_a / 2 - alpha / 2) / complex(1 - a)


def last_visit_gf(p: ModelParams, point) -> complex:
    """Joint gf E[r^R y^V z^L u^M] of the pre-last-visit statistics.

    ``point`` is (r, y, z, u) with the first three inside the closed unit
    polydisc.  The geometric renewal over completed excursions must converge.
    """
    r, y, z, u = point
    ge = complex(height_tail(p.N, p))
    lt = complex(1 - height_tail(p.N, p))
    calc = GenFunCalc(p, PointRing(complex(r), complex(y), complex(z)))
    k_prev = calc.k_n(height_bound=p.N - 1)
    factor = complex(u) * lt * k_prev
    if abs(factor) >= 1:
        raise DivergentGeometricSum("geometric excursion sum diverges at this point")
    return ge / (1 - factor)
