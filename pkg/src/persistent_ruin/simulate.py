"""Monte Carlo simulation of the absorbed walk with per-excursion statistics.

Randomness is counter-based: the uniform driving step t of trajectory i under
seed s is a pure hash of (s, i, t), so results are independent of batch order
and batch size, and any single trajectory can be replayed in isolation.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .params import ModelParams


class StepCapExceeded(RuntimeError):
    pass


STEP_CAP = 10**9

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _mix64(x):
    x = (x ^ (x >> np.uint64(30))) * _MIX1
    x = (x ^ (x >> np.uint64(27))) * _MIX2
    return x ^ (x >> np.uint64(31))


def uniforms(seed: int, index, step: int):
    """Uniform(0,1) samples for (trajectory index, step) under one seed."""
    idx = np.asarray(index, dtype=np.uint64)
    with np.errstate(over="ignore"):
        counter = (idx << np.uint64(40)) | np.uint64(step)
        key = _mix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) * _GOLDEN + _GOLDEN)
        h = _mix64(_mix64(counter ^ key) + _GOLDEN)
    return (h >> np.uint64(11)).astype(np.float64) * (2.0**-53)


@dataclass(frozen=True)
class PortionStats:
    runs: int
    short_runs: int
    long_runs: int
    steps: int


@dataclass(frozen=True)
class TrajectoryStats:
    """Per-excursion statistics of one absorbed trajectory.

    ``last_visit`` aggregates the reflected excursions completed before the
    final zero; ``meander`` covers the stretch from the final zero to +-N.
    """
    excursions: int                # completed excursions M_N
    last_visit: PortionStats
    meander: PortionStats

    @property
    def last_visit_epoch(self) -> int:
        return self.last_visit.steps

    @property
    def absorption_time(self) -> int:
        return self.last_visit.steps + self.meander.steps


@dataclass
class BatchStats:
    """Columnar TrajectoryStats for a batch of trajectories."""
    M: np.ndarray
    R: np.ndarray
    V: np.ndarray
    L: np.ndarray
    R_meander: np.ndarray
    V_meander: np.ndarray
    L_meander: np.ndarray

    def __len__(self):
        return len(self.M)

    def trajectory(self, i: int) -> TrajectoryStats:
        lv = PortionStats(int(self.R[i]), int(self.V[i]),
                          int(self.R[i] - self.V[i]), int(self.L[i]))
        me = PortionStats(int(self.R_meander[i]), int(self.V_meander[i]),
                          int(self.R_meander[i] - self.V_meander[i]),
                          int(self.L_meander[i]))
        return TrajectoryStats(int(self.M[i]), lv, me)


def stats_from_steps(steps, N: int) -> TrajectoryStats:
    """Replay an explicit +-1 step sequence and decompose its statistics.

    The sequence must end exactly at the first visit of +-N.
    """
    level = 0
    last_zero = 0
    for t, s in enumerate(steps, start=1):
        level += s
        if level == 0:
            last_zero = t
        if abs(level) == N:
            if t != len(steps):
                raise ValueError("path continues past absorption")
            break
    else:
        raise ValueError("path never reaches +-N")

    def portion(seq) -> PortionStats:
        if not seq:
            return PortionStats(0, 0, 0, 0)
        runs = short = 0
        run_len = 0
        prev = None
        for s in seq:
            if prev is None or s == prev:
                run_len += 1
            else:
                runs += 1
                short += run_len == 1
                run_len = 1
            prev = s
        runs += 1
        short += run_len == 1
        return PortionStats(runs, short, runs - short, len(seq))

    steps = list(steps)
    pre = steps[:last_zero]
    # per-excursion run counts: split the pre-meander part at its zeros
    level = 0
    excursions = []
    start = 0
    for t, s in enumerate(pre, start=1):
        level += s
        if level == 0:
            excursions.append(pre[start:t])
            start = t
    parts = [portion(e) for e in excursions]
    lv = PortionStats(sum(x.runs for x in parts), sum(x.short_runs for x in parts),
                      sum(x.long_runs for x in parts), sum(x.steps for x in parts))
    return TrajectoryStats(len(excursions), lv, portion(steps[last_zero:]))


def simulate_batch(p: ModelParams, n_traj: int, seed: int,
                   step_cap: int = STEP_CAP, first_index: int = 0) -> BatchStats:
    """Simulate trajectories first_index .. first_index + n_traj - 1."""
    a, b, f, N = float(p.a), float(p.b), p.f, p.N
    idx = np.arange(first_index, first_index + n_traj, dtype=np.uint64)
    n = n_traj

    level = np.zeros(n, dtype=np.int32)
    direction = np.zeros(n, dtype=np.int8)
    run_len = np.zeros(n, dtype=np.int64)
    # current-portion counters
    runs = np.zeros(n, dtype=np.int64)
    shorts = np.zeros(n, dtype=np.int64)
    steps = np.zeros(n, dtype=np.int64)
    # completed-excursion totals
    M = np.zeros(n, dtype=np.int64)
    R = np.zeros(n, dtype=np.int64)
    V = np.zeros(n, dtype=np.int64)
    L = np.zeros(n, dtype=np.int64)

    out = BatchStats(
        M=np.zeros(n, dtype=np.int64), R=np.zeros(n, dtype=np.int64),
        V=np.zeros(n, dtype=np.int64), L=np.zeros(n, dtype=np.int64),
        R_meander=np.zeros(n, dtype=np.int64), V_meander=np.zeros(n, dtype=np.int64),
        L_meander=np.zeros(n, dtype=np.int64))

    rows = np.arange(n)  # positions of the still-active trajectories in `out`
    t = 0
    while rows.size:
        if t >= step_cap:
            raise StepCapExceeded(f"a trajectory exceeded {step_cap} steps")
        u = uniforms(seed, idx, t)
        if t == 0:
            direction = np.where(u < 0.5, 1, -1).astype(np.int8)
            level = direction.astype(np.int32)
            run_len[:] = 1
            steps[:] = 1
        else:
            pers = np.where(np.abs(level) <= f - 1, a, b)
            cont = u < pers
            new_dir = np.where(cont, direction, -direction).astype(np.int8)
            fresh = run_len == 0
            turned = (~fresh) & (new_dir != direction)
            runs += turned
            shorts += turned & (run_len == 1)
            run_len = np.where(turned | fresh, 1, run_len + 1)
            steps += 1
            direction = new_dir
            level = (level + new_dir).astype(np.int32)

        final_runs = runs + 1
        final_shorts = shorts + (run_len == 1)

        done_exc = level == 0
        if done_exc.any():
            M[done_exc] += 1
            R[done_exc] += final_runs[done_exc]
            V[done_exc] += final_shorts[done_exc]
            L[done_exc] += steps[done_exc]
            runs[done_exc] = 0
            shorts[done_exc] = 0
            steps[done_exc] = 0
            run_len[done_exc] = 0

        absorbed = np.abs(level) == N
        if absorbed.any():
            tgt = rows[absorbed]
            out.M[tgt] = M[absorbed]
            out.R[tgt] = R[absorbed]
            out.V[tgt] = V[absorbed]
            out.L[tgt] = L[absorbed]
            out.R_meander[tgt] = final_runs[absorbed]
            out.V_meander[tgt] = final_shorts[absorbed]
            out.L_meander[tgt] = steps[absorbed]
            keep = ~absorbed
            rows, idx = rows[keep], idx[keep]
            level, direction = level[keep], direction[keep]
            run_len, runs, shorts, steps = (run_len[keep], runs[keep],
                                            shorts[keep], steps[keep])
            M, R, V, L = M[keep], R[keep], V[keep], L[keep]
        t += 1
    return out


def simulate_trajectory(p: ModelParams, seed: int, index: int = 0,
                        step_cap: int = STEP_CAP) -> TrajectoryStats:
    """One trajectory, reproducible from (seed, index) alone."""
    batch = simulate_batch(p, 1, seed, step_cap=step_cap, first_index=index)
    return batch.trajectory(0)


# -- scaled statistics -------------------------------------------------------------


def _coef(p: ModelParams):
    a, b = p.a, p.b
    den = (1 - a) * (1 - b)
    return float(Fraction(2 - a - b) / den), float(Fraction(1) / den)


def scaled_statistic(batch: BatchStats, p: ModelParams, kind: str,
                     zeta: float | None = None):
    """Normalized linear statistics whose laws stabilize for large N.

    kinds: 'X' (meander), 'Xcal' (pre-last-visit), 'Y1Y2', 'Xzeta', 'Z1Z2'
    (the latter three require a homogeneous model).
    """
    N = p.N
    a, b = float(p.a), float(p.b)
    if kind == "X":
        c_r, c_v = _coef(p)
        return (batch.L_meander - c_r * batch.R_meander + c_v * batch.V_meander) / N
    if kind == "Xcal":
        c_r, c_v = _coef(p)
        c_m = float(Fraction(p.a * (p.b - p.a)) / ((1 - p.a) * (1 - p.b)))
        return (batch.L - c_r * batch.R + c_v * batch.V - c_m * batch.M) / N
    if kind in ("Y1Y2", "Xzeta", "Z1Z2") and not p.homogeneous:
        raise ValueError(f"statistic {kind!r} is defined for the homogeneous model")
    if kind == "Y1Y2":
        y1 = (batch.R_meander - batch.V_meander / (1 - a)) / N
        y2 = (batch.L_meander - batch.R_meander / (1 - a)) / N - y1
        return y1, y2
    if kind == "Xzeta":
        if zeta is None:
            raise ValueError("Xzeta needs a zeta value")
        return (batch.L_meander - (1 + zeta) / (1 - a) * batch.R_meander
                + zeta / (1 - a) ** 2 * batch.V_meander) / N
    if kind == "Z1Z2":
        z1 = (batch.R - batch.V / (1 - a) + a * batch.M) / N
        z2 = (batch.L - batch.R / (1 - a) + a / (1 - a) * batch.M) / N - z1
        return z1, z2
    raise ValueError(f"unknown statistic {kind!r}")


def empirical_cf(samples, t):
    """Empirical characteristic function and its standard error.

    For joint laws pass ``samples`` as a pair of arrays and ``t`` as a pair.
    Returns (value, stderr) where stderr combines both components.
    """
    if isinstance(samples, tuple):
        s1, s2 = np.asarray(samples[0]), np.asarray(samples[1])
        phase = t[0] * s1 + t[1] * s2
        n = len(s1)
    else:
        phase = float(t) * np.asarray(samples)
        n = len(phase)
    vals = np.exp(1j * phase)
    mean = vals.mean()
    se = np.hypot(vals.real.std(ddof=1), vals.imag.std(ddof=1)) / np.sqrt(n)
    return mean, float(se)
