"""Exact one-sided passage probabilities, height distribution, excursion counts.

All probabilities are exact rationals.  ``rho_oracle`` recomputes the
closed-form passage probability by solving the absorbing Markov chain on
(level, last-direction) states directly, and is used to certify the formulas.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .params import ModelParams, gamma_turn


class IndexError_(ValueError):
    pass


def pi_value(m: int, n: int, p: ModelParams) -> Fraction:
    """Normalizing factor Pi_{m,n} for the one-sided passage m -> n."""
    if m == n:
        raise IndexError_("passage endpoints must differ")
    if min(m, n) < 0 or max(m, n) > p.N:
        raise IndexError_("passage endpoints must lie in [0, N]")
    a, b, f = p.a, p.b, p.f
    if m < n:  # upward
        d = n - m
        if n <= f - 1:
            return Fraction(b, a) * (d - (d - 1) * a)
        if m >= f:
            return Fraction(d) - (d - 1) * b
        ell, j = f - m, n - f
        return j + ell * Fraction(b, a) - (ell + j - 1) * b
    d = m - n  # downward
    if m <= f - 1:
        return Fraction(b, a) * (d - (d - 1) * a)
    if n >= f:
        return Fraction(d) - (d - 1) * b
    ell, j = f - n, m - f
    return (j + 1) + (ell - 1) * Fraction(b, a) - (ell + j - 1) * b


def rho(m: int, n: int, p: ModelParams) -> Fraction:
    """One-sided passage probability from m to n (closed form).

    Upward (m < n): probability that a walk started at m with a fair first
    step reaches n while staying at or above m.  Downward is the mirror.
    The (b/a) prefactor applies when the starting level is in the lower
    stratum.
    """
    pi = pi_value(m, n, p)
    if m <= p.f - 1:
        return Fraction(p.b, p.a) / (2 * pi)
    return Fraction(1) / (2 * pi)


def _solve_fraction_system(rows, rhs):
    """Gaussian elimination over Fraction; rows is a list of dicts col->coef."""
    n = len(rows)
    cols = sorted({c for row in rows for c in row})
    index = {c: i for i, c in enumerate(cols)}
    A = [[Fraction(0)] * n for _ in range(n)]
    for i, row in enumerate(rows):
        for c, v in row.items():
            A[i][index[c]] = v
    bvec = list(rhs)
    for col in range(n):
        piv = next(i for i in range(col, n) if A[i][col])
        A[col], A[piv] = A[piv], A[col]
        bvec[col], bvec[piv] = bvec[piv], bvec[col]
        inv = Fraction(1) / A[col][col]
        A[col] = [v * inv for v in A[col]]
        bvec[col] *= inv
        for i in range(n):
            if i != col and A[i][col]:
                factor = A[i][col]
                A[i] = [v - factor * w for v, w in zip(A[i], A[col])]
                bvec[i] -= factor * bvec[col]
    return {c: bvec[index[c]] for c in cols}


def band_hit_prob(p: ModelParams, lo: int, hi: int, target: int):
    """Exact hit probabilities h(level, dir) for the band-confined chain.

    h(k, d) is the probability that the walk, currently at level k with last
    step direction d, reaches ``target`` (one end of [lo, hi]) before leaving
    the band.  Returns a dict keyed by (level, dir).
    """
    if target not in (lo, hi):
        raise ValueError("target must be an end of the band")
    states = [(k, d) for k in range(lo, hi + 1) if k != target for d in (1, -1)]
    rows, rhs = [], []
    for (k, d) in states:
        pk = p.persistence(k)
        row = {(k, d): Fraction(1)}
        const = Fraction(0)
        for prob, nd in ((pk, d), (1 - pk, -d)):
            nk = k + nd
            if nk == target:
                const += prob
            elif lo <= nk <= hi:
                row[(nk, nd)] = row.get((nk, nd), Fraction(0)) - prob
            # stepping outside [lo, hi] contributes 0
        rows.append(row)
        rhs.append(const)
    sol = _solve_fraction_system(rows, rhs)
    sol[(target, 1)] = Fraction(1)
    sol[(target, -1)] = Fraction(1)
    return sol


def rho_oracle(m: int, n: int, p: ModelParams) -> Fraction:
    """Passage probability recomputed from the absorbing chain (no formulas)."""
    if m == n:
        raise IndexError_("passage endpoints must differ")
    if m < n:
        h = band_hit_prob(p, m, n, n)
        start = (m + 1, 1)
    else:
        h = band_hit_prob(p, n, m, n)
        start = (m - 1, -1)
    return Fraction(1, 2) * h[start]


def u_factor(m: int, j: int, p: ModelParams) -> Fraction:
    """Renewal factor u_{m,j} coupling the passages m -> j and j -> m."""
    gm, gj = gamma_turn(m, p), gamma_turn(j, p)
    val = 1 - 4 * gm * gj * rho(m, j, p) * rho(j, m, p)
    return Fraction(1) / val


@dataclass
class HeightDist:
    """Exact distribution of the excursion height H."""
    p: ModelParams
    pmf: dict[int, Fraction]

    def prob_le(self, n: int) -> Fraction:
        return sum((v for k, v in self.pmf.items() if k <= n), Fraction(0))

    def prob_ge(self, n: int) -> Fraction:
        return 1 - self.prob_le(n - 1)


def height_dist(p: ModelParams, n_max: int | None = None) -> HeightDist:
    """P(H = n) for 1 <= n <= n_max (default N)."""
    if n_max is None:
        n_max = p.N
    a = p.a
    pmf = {1: 1 - a}
    for n in range(2, n_max + 1):
        pmf[n] = 4 * a * rho(1, n, p) * gamma_turn(n, p) * rho(n, 0, p)
    return HeightDist(p, pmf)


def height_tail(n: int, p: ModelParams) -> Fraction:
    """P(H >= n) in closed form (n >= 2)."""
    if n < 2:
        return Fraction(1)
    return 2 * p.a * rho(1, n, p)


def prob_height_le_N(p: ModelParams) -> Fraction:
    """P(H <= N) for the full two-strata model, closed form."""
    a, b, f, N = p.a, p.b, p.f, p.N
    num = (N + 1 - f) * a + (f - 1) * b - (N - 1) * a * b
    den = (N + 1 - f) * a + (f - 1) * b - N * a * b
    return den / num


def m_count_pmf(nu: int, p: ModelParams) -> Fraction:
    """P(M_N = nu): the number of completed excursions is geometric."""
    if nu < 0:
        raise IndexError_("excursion count must be nonnegative")
    lt = 1 - height_tail(p.N, p)   # P(H < N) = P(H <= N-1)
    ge = height_tail(p.N, p)
    return lt**nu * ge
