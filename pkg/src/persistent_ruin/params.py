"""Model parameters for the two-strata persistent gambler's ruin walk.

The walk lives on [-N, N] with unit steps, persistence probability `a` at
altitudes 0..f-1 and `b` at altitudes f..N-1, and a fair coin for the very
first step.  Persistence probabilities are exact rationals.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class ParamError(ValueError):
    pass


class StrataTooLow(ParamError):
    """An operation needs the lower stratum to be at least 3 levels deep."""


def as_rational(x) -> Fraction:
    """Parse a probability as an exact rational ('p/q' strings accepted)."""
    return Fraction(x)


@dataclass(frozen=True)
class ModelParams:
    a: Fraction
    b: Fraction
    f: int
    N: int
    eta: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "a", as_rational(self.a))
        object.__setattr__(self, "b", as_rational(self.b))
        if not (0 < self.a < 1 and 0 < self.b < 1):
            raise ParamError("persistence probabilities must lie strictly in (0, 1)")
        if not isinstance(self.f, int) or not isinstance(self.N, int):
            raise ParamError("f and N must be integers")
        if self.f < 1:
            raise ParamError("stratum boundary f must be at least 1")
        if self.N <= self.f:
            raise ParamError("absorbing level N must exceed the stratum boundary f")

    @property
    def homogeneous(self) -> bool:
        return self.a == self.b

    def persistence(self, level: int) -> Fraction:
        """Probability of repeating the previous step direction at |X| = level."""
        return self.a if level <= self.f - 1 else self.b

    def with_absorber(self, N: int) -> "ModelParams":
        return ModelParams(self.a, self.b, self.f, N, self.eta)


def homogeneous_params(a, N: int, f: int | None = None) -> ModelParams:
    """Single-stratum model: persistence `a` at every altitude."""
    a = as_rational(a)
    if f is None:
        f = N - 1
    return ModelParams(a, a, f, N)


def params_from_eta(a, b, eta: float, N: int) -> ModelParams:
    """Place the stratum boundary at f = round(eta * N)."""
    f = max(1, round(eta * N))
    if f >= N:
        f = N - 1
    return ModelParams(as_rational(a), as_rational(b), f, N, eta)


def gamma_turn(m: int, p: ModelParams) -> Fraction:
    """Turning probability at altitude m."""
    return 1 - p.persistence(m)


def strata_pair_up(m: int, p: ModelParams) -> tuple[Fraction, Fraction]:
    """Parameter pair [a,b]_m^+ governing an upward passage seeded at m."""
    if m <= p.f - 2:
        return (p.a, p.a)
    if m == p.f - 1:
        return (p.a, p.b)
    return (p.b, p.b)


def strata_pair_down(n: int, p: ModelParams) -> tuple[Fraction, Fraction]:
    """Parameter pair [a,b]_n^- governing a downward passage seeded at n."""
    if n <= p.f - 1:
        return (p.a, p.a)
    if n == p.f:
        return (p.a, p.b)
    return (p.b, p.b)
