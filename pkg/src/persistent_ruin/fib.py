"""Fibonacci-type polynomial sequences and their stratified extensions.

Everything here is written against a generic scalar context (``SeriesRing``
for formal series in the marks (r, y, z), or ``PointRing`` for evaluation at
a fixed rational or complex point), so the same recurrences produce exact
series, exact rational evaluations, or complex numbers.
"""
from __future__ import annotations

import cmath
from fractions import Fraction

from .params import ModelParams, strata_pair_up, strata_pair_down
from .ring import PointRing, SeriesRing


class DegenerateAlpha(ArithmeticError):
    """The discriminant beta^2 - 4x vanishes; the closed form is singular."""


def fib_pair(n: int, x, beta):
    """n-th terms (q_n, w_n) of v_{k+1} = beta*v_k - x*v_{k-1}.

    q has seeds q_0 = 0, q_1 = 1; w has seeds w_0 = 1, w_1 = 1.
    """
    if n < 0:
        raise ValueError("index must be nonnegative")
    q_prev, q_cur = 0 * beta, 0 * beta + 1
    w_prev, w_cur = 0 * beta + 1, 0 * beta + 1
    if n == 0:
        return q_prev, w_prev
    for _ in range(n - 1):
        q_prev, q_cur = q_cur, beta * q_cur - x * q_prev
        w_prev, w_cur = w_cur, beta * w_cur - x * w_prev
    return q_cur, w_cur


def fib_closed(n: int, x: complex, beta: complex, tol: float = 1e-12):
    """Closed form of (q_n, w_n) via alpha = sqrt(beta^2 - 4x); complex only."""
    disc = beta * beta - 4 * x
    scale = max(abs(beta) ** 2, 4 * abs(x), 1.0)
    if abs(disc) < tol * scale:
        raise DegenerateAlpha("beta^2 - 4x is (numerically) zero")
    alpha = cmath.sqrt(disc)
    plus = (beta + alpha) ** n
    minus = (beta - alpha) ** n
    q_n = (plus - minus) / (2**n * alpha)
    if n == 0:
        return 0j, 1 + 0j
    plus1 = (beta + alpha) ** (n - 1)
    minus1 = (beta - alpha) ** (n - 1)
    q_nm1 = (plus1 - minus1) / (2 ** (n - 1) * alpha)
    return q_n, q_n - x * q_nm1


class StrataTables:
    """Cached kernels, starred sequences and stratified arrays for one model.

    Parameters
    ----------
    p : ModelParams
    ring : SeriesRing | PointRing
        Scalar context the tables are built over.
    """

    def __init__(self, p: ModelParams, ring):
        self.p = p
        self.ring = ring
        self._wstar: dict[Fraction, list] = {}
        self._qstar: dict[Fraction, list] = {}
        self._wbar: dict[tuple[int, int], object] = {}
        self._qbar: list = []
        self._cross = None

    # -- kernels ---------------------------------------------------------------

    def omega(self, aa, bb):
        r, y, z = self.ring.r, self.ring.y, self.ring.z
        return 1 - (1 - aa) * (1 - bb) * r * r * y * y * z * z

    def tau(self, aa, bb):
        r, y, z = self.ring.r, self.ring.y, self.ring.z
        return 1 + (1 - aa) * (1 - bb) * r * r * z * z * y * (1 - y)

    def k_kernel(self, aa, bb):
        return (aa + bb - aa * bb) / self.omega(aa, bb)

    def h_kernel(self, aa, bb):
        return self.tau(aa, bb) / self.omega(aa, bb)

    # -- homogeneous and mixed recurrence coefficients ---------------------------

    def homog_coeffs(self, aa):
        """(x_a, beta_a) for the single-stratum starred recurrence."""
        r, y, z = self.ring.r, self.ring.y, self.ring.z
        t = self.tau(aa, aa)
        x_a = aa * aa * z * z * t * t
        beta_a = 1 + z * z * (
            aa * aa
            - (1 - aa) ** 2 * r * r * (y * y + aa * aa * (1 - y) ** 2 * z * z)
        )
        return x_a, beta_a

    def mixed_coeffs(self, aa, bb):
        """(x(a,b), beta(a,b)) carrying the passage across the stratum boundary."""
        r, y, z = self.ring.r, self.ring.y, self.ring.z
        t = self.tau(aa, bb)
        x_ab = bb * bb * z * z * t * t
        _, beta_b = self.homog_coeffs(bb)
        beta_ab = beta_b - (bb - aa) * bb * bb * (1 - bb) * r * r * (1 - y) ** 2 * z**4
        return x_ab, beta_ab

    # -- starred sequences -------------------------------------------------------

    def w0_star(self, aa):
        """Backward extension w_0* = (beta_a - omega_a)/x_a."""
        x_a, beta_a = self.homog_coeffs(aa)
        return (beta_a - self.omega(aa, aa)) / x_a

    def q0_star(self, aa):
        r, y, z = self.ring.r, self.ring.y, self.ring.z
        t = self.tau(aa, aa)
        num = -(1 - y) * (1 + y + (1 - aa) ** 2 * r * r * y * y * z * z * (1 - y))
        return num / (t * t)

    def wstar(self, n: int, aa):
        """w_n* for the stratum with persistence aa (n >= 1)."""
        seq = self._wstar.setdefault(aa, [None, self.ring.one, self.omega(aa, aa)])
        x_a, beta_a = self.homog_coeffs(aa)
        while len(seq) <= n:
            seq.append(beta_a * seq[-1] - x_a * seq[-2])
        if n == 0:
            return self.w0_star(aa)
        return seq[n]

    def qstar(self, n: int, aa):
        """q_n* for the stratum with persistence aa (n >= 0)."""
        y = self.ring.y
        seq = self._qstar.setdefault(aa, [self.q0_star(aa), y * y])
        x_a, beta_a = self.homog_coeffs(aa)
        while len(seq) <= n:
            seq.append(beta_a * seq[-1] - x_a * seq[-2])
        return seq[n]

    def star_seq(self, n: int, aa):
        return self.qstar(n, aa), self.wstar(n, aa)

    def star_linear(self, n: int, aa):
        """(q_n*, w_n*) recomputed as linear combinations of plain (q_n, w_n)."""
        y = self.ring.y
        x_a, beta_a = self.homog_coeffs(aa)
        q_n, w_n = fib_pair(n, x_a, beta_a)
        c2 = self.q0_star(aa)
        c1 = y * y - c2
        d2 = self.w0_star(aa)
        d1 = 1 - d2
        return c1 * q_n + c2 * w_n, d1 * q_n + d2 * w_n

    # -- crossing matrices --------------------------------------------------------

    def cross_matrices(self):
        """(Q, B, M, kappa): the 2x2 transfer data across the stratum boundary."""
        if self._cross is not None:
            return self._cross
        a, b = self.p.a, self.p.b
        q1b, w1b = self.qstar(1, b), self.wstar(1, b)
        q2b, w2b = self.qstar(2, b), self.wstar(2, b)
        Q = ((q1b, w1b), (q2b, w2b))
        x_ab, beta_ab = self.mixed_coeffs(a, b)
        c = Fraction(b - a, 1 - a)
        d = Fraction(1 - b, 1 - a)
        kappa = c * beta_ab - x_ab
        B = ((c * self.ring.one, d * self.ring.one), (kappa, d * beta_ab))
        det = q1b * w2b - w1b * q2b
        adj = ((w2b, -1 * w1b), (-1 * q2b, q1b))
        # individual entries of Q^{-1} are not series; adj(Q).B is divisible by det
        M = tuple(
            tuple(
                (adj[i][0] * B[0][j] + adj[i][1] * B[1][j]) / det
                for j in range(2))
            for i in range(2))
        self._cross = (Q, B, M, kappa)
        return self._cross

    def d_coeffs(self, ell: int):
        """Coefficient pair d(ell) = M . (w_ell*(a), w_{ell+1}*(a))."""
        _, _, M, _ = self.cross_matrices()
        wl = self.wstar(ell, self.p.a)
        wl1 = self.wstar(ell + 1, self.p.a)
        return (M[0][0] * wl + M[0][1] * wl1, M[1][0] * wl + M[1][1] * wl1)

    # -- stratified denominators ----------------------------------------------------

    def wbar(self, m: int, n: int):
        """Stratified passage denominator for a passage seeded m -> n, |n-m| >= 1."""
        if m == n:
            raise ValueError("wbar needs distinct indices")
        key = (m, n)
        cached = self._wbar.get(key)
        if cached is not None:
            return cached
        val = self._wbar_compute(m, n)
        self._wbar[key] = val
        return val

    def _wbar_compute(self, m, n):
        p = self.p
        a, b, f = p.a, p.b, p.f
        d = abs(n - m)
        if d == 1:
            return self.ring.one
        if n > m:  # upward passage
            if d == 2:
                return self.omega(*strata_pair_up(m, p))
            if n <= f:
                return self.wstar(d, a)
            if m >= f:
                return self.wstar(d, b)
            if n == f + 1:
                ell = f - m
                return (
                    Fraction(1 - b, 1 - a) * self.wstar(ell + 1, a)
                    + Fraction(b - a, 1 - a) * self.wstar(ell, a))
            if n == f + 2:
                x_ab, beta_ab = self.mixed_coeffs(a, b)
                return beta_ab * self.wbar(m, f + 1) - x_ab * self.wbar(m, f)
            x_b, beta_b = self.homog_coeffs(b)
            return beta_b * self.wbar(m, n - 1) - x_b * self.wbar(m, n - 2)
        # downward passage
        if d == 2:
            return self.omega(*strata_pair_down(m, p))
        if m <= f - 1:
            return self.wstar(d, a)
        if n >= f - 1:
            return self.wstar(d, b)
        if n == f - 2:
            j = m - f
            return (
                Fraction(1 - a, 1 - b) * self.wstar(j + 2, b)
                + Fraction(a - b, 1 - b) * self.wstar(j + 1, b))
        if n == f - 3:
            x_ba, beta_ba = self.mixed_coeffs(b, a)
            return beta_ba * self.wbar(m, f - 2) - x_ba * self.wbar(m, f - 1)
        x_a, beta_a = self.homog_coeffs(a)
        return beta_a * self.wbar(m, n + 1) - x_a * self.wbar(m, n + 2)

    def wbar_closed(self, ell: int, j: int):
        """Closed form for the upward crossing value wbar(f - ell, f + j)."""
        d1, d2 = self.d_coeffs(ell)
        b = self.p.b
        return d1 * self.qstar(j, b) + d2 * self.wstar(j, b)

    # -- stratified numerators ---------------------------------------------------

    def qbar(self, n: int):
        """Stratified excursion numerator sequence (n >= 0)."""
        p = self.p
        a, b, f = p.a, p.b, p.f
        seq = self._qbar
        if not seq:
            seq.append(self.qstar(0, a))
        while len(seq) <= n:
            k = len(seq)
            if k < f:
                seq.append(self.qstar(k, a))
            elif k == f:
                seq.append(
                    Fraction(1 - b, 1 - a) * self.qstar(f, a)
                    + Fraction(b - a, 1 - a) * self.qstar(f - 1, a))
            elif k == f + 1:
                x_ab, beta_ab = self.mixed_coeffs(a, b)
                seq.append(beta_ab * seq[f] - x_ab * seq[f - 1])
            else:
                x_b, beta_b = self.homog_coeffs(b)
                seq.append(beta_b * seq[k - 1] - x_b * seq[k - 2])
        return seq[n]

    def qbar_closed(self, n: int):
        """Matrix closed form for qbar at index n = f + j - 1, j >= 1."""
        p = self.p
        j = n + 1 - p.f
        if j < 1:
            raise ValueError("closed form applies above the stratum boundary")
        _, _, M, _ = self.cross_matrices()
        qa1 = self.qstar(p.f - 1, p.a)
        qa2 = self.qstar(p.f, p.a)
        v0 = M[0][0] * qa1 + M[0][1] * qa2
        v1 = M[1][0] * qa1 + M[1][1] * qa2
        return self.qstar(j, p.b) * v0 + self.wstar(j, p.b) * v1

    # -- interlacing brackets ------------------------------------------------------

    def bracket_w(self, m: int, n: int):
        """[wbar]_{m,n} = wbar(m,n) wbar(m+1,n+1) - wbar(m,n+1) wbar(m+1,n)."""
        return (self.wbar(m, n) * self.wbar(m + 1, n + 1)
                - self.wbar(m, n + 1) * self.wbar(m + 1, n))

    def bracket_wq(self, n: int):
        """[wbar, qbar]_n = wbar(n,0) qbar(n+1) - qbar(n) wbar(n+1,0)."""
        return (self.wbar(n, 0) * self.qbar(n + 1)
                - self.qbar(n) * self.wbar(n + 1, 0))
