"""Brute-force path enumeration with exact weights.

This module knows nothing about the closed formulas: it walks every lattice
path directly and accumulates exact rational probability masses.  It exists
to certify the generating-function machinery coefficient by coefficient.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .params import ModelParams, homogeneous_params
from .ring import Series3


class EmptyPath(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """The enumeration would visit more path edges than the allowed budget."""


@dataclass(frozen=True)
class PathSignature:
    runs: int
    short_runs: int
    long_runs: int
    steps: int
    height: int


@dataclass
class JointDist:
    """Exact joint distribution over path signatures."""
    mass: dict[PathSignature, Fraction] = field(default_factory=dict)

    def add(self, sig: PathSignature, w: Fraction):
        self.mass[sig] = self.mass.get(sig, Fraction(0)) + w

    def total(self) -> Fraction:
        return sum(self.mass.values(), Fraction(0))

    def marginal_rvl(self) -> dict[tuple[int, int, int], Fraction]:
        """Collapse the height: (runs, short runs, steps) -> mass."""
        out: dict[tuple[int, int, int], Fraction] = {}
        for sig, w in self.mass.items():
            key = (sig.runs, sig.short_runs, sig.steps)
            out[key] = out.get(key, Fraction(0)) + w
        return out


def count_path_stats(steps) -> PathSignature:
    """Run/step statistics of an explicit +-1 step sequence.

    Height is the largest absolute displacement from the starting point.
    """
    steps = list(steps)
    if not steps:
        raise EmptyPath("cannot take statistics of an empty path")
    if any(s not in (1, -1) for s in steps):
        raise ValueError("steps must be +-1")
    runs = short = 0
    run_len = 0
    prev = None
    level = 0
    height = 0
    for s in steps:
        level += s
        height = max(height, abs(level))
        if prev is None or s == prev:
            run_len += 1
        else:
            runs += 1
            short += run_len == 1
            run_len = 1
        prev = s
    runs += 1
    short += run_len == 1
    return PathSignature(runs, short, runs - short, len(steps), height)


def enum_excursions(p: ModelParams, l_max: int, height_cap: int | None = None,
                    budget: int = 10**8) -> JointDist:
    """Exact law of (runs, short runs, steps, height) over a single excursion.

    Excursions of both signs are included (a negative excursion contributes
    the statistics of its reflection, which are identical).  Only excursions
    with at most ``l_max`` steps and height at most ``height_cap`` are kept,
    so the masses are the exact probabilities of those signatures.
    """
    if height_cap is None:
        height_cap = p.N
    dist = JointDist()
    visited = 0

    # state: level, run_len, runs_closed, shorts, steps, height; dir encoded by
    # reflection (positive excursions only, mass doubled for the mirror).
    def walk(level, direction, run_len, runs, shorts, steps, height, w):
        nonlocal visited
        if steps >= l_max:
            return
        pers = p.persistence(level)
        for prob, nd in ((pers, direction), (1 - pers, -direction)):
            if prob == 0:
                continue
            nl = level + nd
            visited += 1
            if visited > budget:
                raise BudgetExceeded(f"enumeration exceeded {budget} edges")
            if nd == direction:
                n_run, n_runs, n_shorts = run_len + 1, runs, shorts
            else:
                n_run, n_runs, n_shorts = 1, runs + 1, shorts + (run_len == 1)
            if nl == 0:
                total_runs = n_runs + 1
                total_shorts = n_shorts + (n_run == 1)
                sig = PathSignature(total_runs, total_shorts,
                                    total_runs - total_shorts, steps + 1, height)
                dist.add(sig, w * prob * 2)
                continue
            if nl > height_cap:
                continue
            walk(nl, nd, n_run, n_runs, n_shorts, steps + 1,
                 max(height, nl), w * prob)

    if height_cap >= 1 and l_max >= 2:
        walk(1, 1, 1, 0, 0, 1, 1, Fraction(1, 2))
    return dist


def enum_first_passage(m: int, n: int, p: ModelParams, l_max: int,
                       max_degree: int | None = None,
                       budget: int = 10**8):
    """Exact truncation of the conditional first-passage gf from m to n.

    Enumerates every one-sided path from m to n (first two steps toward n,
    never beyond m on the far side) with at most ``l_max`` steps, divides out
    the exact probability of the conditioning event, and returns the result
    as a series in (r, y, z) whose coefficients up to z^l_max are exact.
    """
    from .ruin import band_hit_prob  # local import to keep layering clean

    if abs(n - m) < 2:
        raise ValueError("first passage needs |n - m| >= 2")
    direction = 1 if n > m else -1
    lo, hi = (m, n) if n > m else (n, m)
    maxd = max_degree if max_degree is not None else l_max
    num = Series3(max_degree=maxd)
    visited = 0

    def record(runs, shorts, steps, w):
        mono = (runs, shorts, steps)
        if steps <= maxd:
            num.coeffs[mono] = num.coeffs.get(mono, Fraction(0)) + w

    def walk(level, d, run_len, runs, shorts, steps, w):
        nonlocal visited
        if steps >= l_max:
            return
        pers = p.persistence(level)
        for prob, nd in ((pers, d), (1 - pers, -d)):
            if prob == 0:
                continue
            nl = level + nd
            visited += 1
            if visited > budget:
                raise BudgetExceeded(f"enumeration exceeded {budget} edges")
            if nl < lo or nl > hi:
                continue
            if nd == d:
                n_run, n_runs, n_shorts = run_len + 1, runs, shorts
            else:
                n_run, n_runs, n_shorts = 1, runs + 1, shorts + (run_len == 1)
            if nl == n:
                record(n_runs + 1, n_shorts + (n_run == 1), steps + 1, w * prob)
                continue
            walk(nl, nd, n_run, n_runs, n_shorts, steps + 1, w * prob)

    # conditioning event: first two steps toward n, then a one-sided passage
    first = m + direction
    w0 = Fraction(1, 2) * p.persistence(first)
    if abs(n - m) == 2:
        record(1, 0, 2, w0)
        mass = w0
    else:
        walk(m + 2 * direction, direction, 2, 0, 0, 2, w0)
        h = band_hit_prob(p, lo, hi, n)
        mass = w0 * h[(m + 2 * direction, direction)]
    out = num * (Fraction(1) / mass)
    return out, mass


def symmetry_check(a, n_max: int, budget: int = 10**8):
    """Exact check of the runs/steps reflection law between walks a and 1-a.

    For each even length 2n (2 <= n <= n_max) compares
    (1-a) P_a(L=2n, R=2k, U=l) with a P_{1-a}(L=2n, L-R=2k, U=l) cell by cell.
    Returns (ok, failures) where failures lists offending cells; the n = 1
    cells are excluded (the law starts at length 4).
    """
    a = Fraction(a)
    p1 = homogeneous_params(a, n_max + 2)
    p2 = homogeneous_params(1 - a, n_max + 2)
    d1 = enum_excursions(p1, 2 * n_max, height_cap=n_max, budget=budget)
    d2 = enum_excursions(p2, 2 * n_max, height_cap=n_max, budget=budget)

    def cells(dist):
        out: dict[tuple[int, int, int], Fraction] = {}
        for sig, w in dist.mass.items():
            key = (sig.steps, sig.runs, sig.long_runs)
            out[key] = out.get(key, Fraction(0)) + w
        return out

    c1, c2 = cells(d1), cells(d2)
    failures = []
    for n in range(2, n_max + 1):
        L = 2 * n
        keys = {(R, U) for (L_, R, U) in c1 if L_ == L}
        keys |= {(L - R, U) for (L_, R, U) in c2 if L_ == L}
        for (R, U) in sorted(keys):
            lhs = (1 - a) * c1.get((L, R, U), Fraction(0))
            rhs = a * c2.get((L, L - R, U), Fraction(0))
            if lhs != rhs:
                failures.append((L, R, U, lhs, rhs))
    return (not failures), failures
