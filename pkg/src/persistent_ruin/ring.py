"""Exact scalar arithmetic: rationals, complex points, and truncated power series.

The series variant is a sparse trivariate power series in the formal marks
(r, y, z) -- runs, short runs, steps -- with Fraction coefficients, truncated
at a fixed z-degree.  Rationals are plain fractions.Fraction; complex points
are plain Python complex.  All formula code is written against whichever of
the three is supplied, so the same expressions run exactly (series, rationals)
or numerically (complex).
"""
from __future__ import annotations

from fractions import Fraction

Monomial = tuple[int, int, int]  # exponents of r, y, z

DEFAULT_MAX_DEGREE = 24


class RingError(ArithmeticError):
    pass


class NonUnitDivisor(RingError):
    """Division by a series that is not a monomial times a unit."""


class VariantMismatch(RingError):
    """Arithmetic attempted between incompatible scalar variants."""


class TruncationExceeded(RingError):
    """A coefficient beyond the truncation order was requested."""


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise VariantMismatch(f"cannot use {type(x).__name__} as a series coefficient")


class Series3:
    """Sparse truncated power series in (r, y, z) over the rationals.

    Coefficients live in a dict keyed by exponent triples.  Multiplication
    drops any term whose z-degree exceeds max_degree; division is exact long
    division and requires the divisor to be a monomial times a unit (the
    quotient loses as many z-orders as the monomial's z-degree).
    """

    __slots__ = ("max_degree", "coeffs")

    def __init__(self, coeffs=None, max_degree=DEFAULT_MAX_DEGREE):
        self.max_degree = max_degree
        self.coeffs: dict[Monomial, Fraction] = {}
        if coeffs:
            for mono, c in coeffs.items():
                c = _as_fraction(c)
                if c and mono[2] <= max_degree:
                    self.coeffs[mono] = c

    # -- construction helpers -------------------------------------------------

    @classmethod
    def constant(cls, c, max_degree=DEFAULT_MAX_DEGREE):
        return cls({(0, 0, 0): Fraction(c)}, max_degree)

    def copy(self):
        s = Series3(max_degree=self.max_degree)
        s.coeffs = dict(self.coeffs)
        return s

    # -- queries --------------------------------------------------------------

    def coeff(self, i, j, k):
        if k > self.max_degree:
            raise TruncationExceeded(
                f"z-degree {k} beyond truncation order {self.max_degree}")
        return self.coeffs.get((i, j, k), Fraction(0))

    @property
    def constant_term(self):
        return self.coeffs.get((0, 0, 0), Fraction(0))

    def is_zero(self):
        return not self.coeffs

    def z_degree(self):
        return max((k for (_, _, k) in self.coeffs), default=0)

    def eval(self, r, y, z):
        """Evaluate at a point; exact if the point is rational."""
        total = 0
        for (i, j, k), c in self.coeffs.items():
            total = total + c * r**i * y**j * z**k
        return total

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Series3):
            return other
        if isinstance(other, (int, Fraction)):
            return Series3({(0, 0, 0): other}, self.max_degree)
        if isinstance(other, (float, complex)):
            raise VariantMismatch("cannot mix a series with a float/complex scalar")
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        maxd = min(self.max_degree, other.max_degree)
        out = Series3(max_degree=maxd)
        for mono, c in self.coeffs.items():
            if mono[2] <= maxd:
                out.coeffs[mono] = c
        for mono, c in other.coeffs.items():
            if mono[2] > maxd:
                continue
            s = out.coeffs.get(mono, Fraction(0)) + c
            if s:
                out.coeffs[mono] = s
            else:
                out.coeffs.pop(mono, None)
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Series3(max_degree=self.max_degree)
        out.coeffs = {m: -c for m, c in self.coeffs.items()}
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _as_fraction(other)
            if not other:
                return Series3(max_degree=self.max_degree)
            out = Series3(max_degree=self.max_degree)
            out.coeffs = {m: c * other for m, c in self.coeffs.items()}
            return out
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        maxd = min(self.max_degree, other.max_degree)
        out = Series3(max_degree=maxd)
        acc = out.coeffs
        for (i1, j1, k1), c1 in self.coeffs.items():
            if k1 > maxd:
                continue
            for (i2, j2, k2), c2 in other.coeffs.items():
                k = k1 + k2
                if k > maxd:
                    continue
                mono = (i1 + i2, j1 + j2, k)
                s = acc.get(mono, Fraction(0)) + c1 * c2
                if s:
                    acc[mono] = s
                else:
                    acc.pop(mono, None)
        return out

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / _as_fraction(other))
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return _divide(self, other)

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            num = Series3({(0, 0, 0): other}, self.max_degree)
            return _divide(num, self)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return (1 / self) ** (-n)
        out = Series3({(0, 0, 0): 1}, self.max_degree)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Series3({(0, 0, 0): other}, self.max_degree)
        if not isinstance(other, Series3):
            return NotImplemented
        maxd = min(self.max_degree, other.max_degree)
        a = {m: c for m, c in self.coeffs.items() if m[2] <= maxd}
        b = {m: c for m, c in other.coeffs.items() if m[2] <= maxd}
        return a == b

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    # -- printing -------------------------------------------------------------

    def __str__(self):
        if not self.coeffs:
            return "0"
        def key(mono):
            i, j, k = mono
            return (i + j + k, mono)
        parts = []
        for mono in sorted(self.coeffs, key=key):
            i, j, k = mono
            c = self.coeffs[mono]
            vars_ = "".join(
                f"{v}^{e}" if e > 1 else v
                for v, e in (("r", i), ("y", j), ("z", k)) if e)
            if vars_:
                parts.append(f"{c}*{vars_}" if c != 1 else vars_)
            else:
                parts.append(str(c))
        return " + ".join(parts)

    def __repr__(self):
        return f"Series3({self}, max_degree={self.max_degree})"


def _divide(num: Series3, den: Series3) -> Series3:
    """Exact long division of truncated series.

    The divisor must factor as c * r^i y^j z^k * (1 + O(z)); the quotient is
    reliable only up to max_degree - k, which becomes its truncation order.
    """
    if not den.coeffs:
        raise ZeroDivisionError("series division by zero")
    al = min(i for (i, _, _) in den.coeffs)
    ga = min(j for (_, j, _) in den.coeffs)
    ka = min(k for (_, _, k) in den.coeffs)
    c0 = den.coeffs.get((al, ga, ka))
    if c0 is None:
        raise NonUnitDivisor("divisor has no minimal monomial; cannot invert")
    for (i, j, k) in den.coeffs:
        if k == ka and (i, j) != (al, ga):
            raise NonUnitDivisor("divisor's lowest z-layer is not a constant")
    if num.coeffs:
        for (i, j, k) in num.coeffs:
            if i < al or j < ga or k < ka:
                raise NonUnitDivisor("dividend not divisible by the divisor's monomial")
    new_max = min(num.max_degree, den.max_degree) - ka
    if new_max < 0:
        raise NonUnitDivisor("division exhausts the truncation order")

    # shifted divisor layers by z-degree (layer 0 is the constant c0)
    dlayers: dict[int, dict[tuple[int, int], Fraction]] = {}
    for (i, j, k), c in den.coeffs.items():
        kk = k - ka
        if 0 < kk <= new_max:
            dlayers.setdefault(kk, {})[(i - al, j - ga)] = c
    nlayers: dict[int, dict[tuple[int, int], Fraction]] = {}
    for (i, j, k), c in num.coeffs.items():
        kk = k - ka
        if kk <= new_max:
            nlayers.setdefault(kk, {})[(i - al, j - ga)] = c

    qlayers: dict[int, dict[tuple[int, int], Fraction]] = {}
    for k in range(new_max + 1):
        layer = dict(nlayers.get(k, {}))
        for m, dm in dlayers.items():
            if m > k:
                continue
            qm = qlayers.get(k - m)
            if not qm:
                continue
            for (i1, j1), c1 in dm.items():
                for (i2, j2), c2 in qm.items():
                    mono = (i1 + i2, j1 + j2)
                    s = layer.get(mono, Fraction(0)) - c1 * c2
                    if s:
                        layer[mono] = s
                    else:
                        layer.pop(mono, None)
        qlayers[k] = {m: c / c0 for m, c in layer.items()}

    out = Series3(max_degree=new_max)
    for k, layer in qlayers.items():
        for (i, j), c in layer.items():
            if c:
                out.coeffs[(i, j, k)] = c
    return out


# -- ring contexts -------------------------------------------------------------


class SeriesRing:
    """Formal context: r, y, z are series generators truncated at max_degree."""

    kind = "series"

    def __init__(self, max_degree=DEFAULT_MAX_DEGREE):
        self.max_degree = max_degree
        self.r = Series3({(1, 0, 0): 1}, max_degree)
        self.y = Series3({(0, 1, 0): 1}, max_degree)
        self.z = Series3({(0, 0, 1): 1}, max_degree)
        self.one = Series3({(0, 0, 0): 1}, max_degree)


class PointRing:
    """Numeric context: r, y, z are fixed values (complex, or Fraction for exactness)."""

    kind = "point"

    def __init__(self, r, y, z):
        self.r, self.y, self.z = r, y, z
        self.one = r * 0 + 1


# -- spec-level operation surface ----------------------------------------------


def scalar_arith(op, x, y):
    """Apply a named arithmetic op to two scalars of the same variant."""
    sx = isinstance(x, Series3)
    sy = isinstance(y, Series3)
    cx = isinstance(x, (float, complex))
    cy = isinstance(y, (float, complex))
    if (sx and cy) or (sy and cx):
        raise VariantMismatch("cannot mix series and complex scalars")
    ops = {
        "add": lambda p, q: p + q,
        "sub": lambda p, q: p - q,
        "mul": lambda p, q: p * q,
        "div": lambda p, q: p / q,
    }
    if op not in ops:
        raise ValueError(f"unknown op {op!r}")
    return ops[op](x, y)


def series_eval(s: Series3, point):
    """Evaluate a series at (r, y, z); exact when the point is rational."""
    r, y, z = point
    return s.eval(r, y, z)


def series_coeff(s: Series3, i, j, k):
    return s.coeff(i, j, k)
