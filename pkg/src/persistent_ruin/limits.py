"""Limit-law characteristic functions and Fourier inversion.

The limiting laws of the scaled run/step statistics have explicit
characteristic functions built from hyperbolic functions; densities are
recovered by direct trapezoid quadrature of the inversion integral.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class TailNotDecayed(ArithmeticError):
    """The characteristic function has not decayed at the integration cutoff."""


class InversionError(ArithmeticError):
    pass


@dataclass(frozen=True)
class LimitParams:
    """Derived constants of the two-strata limit laws."""
    a: float
    b: float
    eta: float
    sigma1: float
    sigma2: float
    kappa1: float
    kappa2: float


def limit_params(a, b, eta) -> LimitParams:
    a, b, eta = float(a), float(b), float(eta)
    if not (0 < a < 1 and 0 < b < 1 and 0 <= eta <= 1):
        raise ValueError("need 0 < a, b < 1 and 0 <= eta <= 1")
    sigma1 = math.sqrt(a + b * b - 2 * a * b)
    sigma2 = math.sqrt(b + a * a - 2 * a * b)
    kappa1 = eta * sigma1 / (1 - b)
    kappa2 = (1 - eta) * sigma2 / (1 - a)
    return LimitParams(a, b, eta, sigma1, sigma2, kappa1, kappa2)


def phi_hat(t, lp: LimitParams):
    """Characteristic function of the limiting scaled meander statistic."""
    t = np.asarray(t, dtype=float)
    a, b = lp.a, lp.b
    s1, s2, k1, k2 = lp.sigma1, lp.sigma2, lp.kappa1, lp.kappa2
    num = (b * k1 * s2 + a * k2 * s1) * t
    den = (a * s1 * np.cosh(k1 * t) * np.sinh(k2 * t)
           + b * s2 * np.sinh(k1 * t) * np.cosh(k2 * t)
           + 1j * (b - a) ** 2 * np.sinh(k1 * t) * np.sinh(k2 * t))
    out = np.where(t == 0, 1.0 + 0j, num / np.where(t == 0, 1.0, den))
    return out if out.ndim else complex(out)


def special_phi_hat(t, a):
    """Meander cf in the symmetric case b = 1 - a with eta = a."""
    t = np.asarray(t, dtype=float)
    a = float(a)
    sig = math.sqrt(1 - 3 * a + 3 * a * a)
    den = np.sinh(sig * t) * (sig * np.cosh(sig * t)
                              + 1j * (1 - 2 * a) ** 2 * np.sinh(sig * t))
    out = np.where(t == 0, 1.0 + 0j, sig * sig * t / np.where(t == 0, 1.0, den))
    return out if out.ndim else complex(out)


def psi_hat(t, lp: LimitParams):
    """Characteristic function of the limiting pre-last-visit statistic
    combined with the meander (the full scaled statistic)."""
    t = np.asarray(t, dtype=float)
    a, b = lp.a, lp.b
    s1, s2, k1, k2 = lp.sigma1, lp.sigma2, lp.kappa1, lp.kappa2
    den = (a * b * s1 * s2 * np.cosh(k1 * t) * np.cosh(k2 * t)
           + a * a * s1 * s1 * np.sinh(k1 * t) * np.sinh(k2 * t)
           + 1j * a * s1 * (b - a) ** 2 * np.cosh(k1 * t) * np.sinh(k2 * t))
    out = a * b * s1 * s2 / den
    return out if np.asarray(out).ndim else complex(out)


def xcal_cf(t, lp: LimitParams):
    """Cf of the limiting pre-last-visit statistic: psi_hat / phi_hat."""
    return psi_hat(t, lp) / phi_hat(t, lp)


def joint_cf_homog(s, t, a):
    """Joint cf of the limiting (Y1, Y2) pair in the homogeneous model."""
    a = float(a)
    w = np.sqrt((1 - a) * np.asarray(s, dtype=float) ** 2
                + a * np.asarray(t, dtype=float) ** 2)
    out = np.where(w == 0, 1.0, w / np.sinh(np.where(w == 0, 1.0, w)))
    return out if np.asarray(out).ndim else complex(out)


def z_joint_cf(s, t, a):
    """Joint cf of the limiting (Z1, Z2) pair in the homogeneous model."""
    a = float(a)
    w = np.sqrt((1 - a) * np.asarray(s, dtype=float) ** 2
                + a * np.asarray(t, dtype=float) ** 2)
    out = np.where(w == 0, 1.0, np.tanh(np.where(w == 0, 1.0, w)) / np.where(w == 0, 1.0, w))
    return out if np.asarray(out).ndim else complex(out)


@dataclass
class DensityGrid:
    xs: np.ndarray
    values: np.ndarray
    mean: float          # from the cf derivative at 0 (Richardson-refined)
    mean_grid: float     # from numerical integration of x * density
    argmax: float
    max_imag_residue: float


def cf_mean(cf, h: float = 1e-5) -> float:
    """E[X] = -i cf'(0), central differences with one Richardson step."""
    def d(hh):
        return (cf(hh) - cf(-hh)) / (2 * hh)
    d1, d2 = d(h), d(h / 2)
    deriv = (4 * d2 - d1) / 3
    return float((-1j * deriv).real)


def invert_cf(cf, xs, T: float | None = None, dt: float = 1e-3,
              decay_rate: float | None = None,
              imag_tol: float = 1e-8) -> DensityGrid:
    """Density on the grid ``xs`` by trapezoid inversion of the cf.

    ``T`` is the integration cutoff; if omitted it is chosen from
    ``decay_rate`` (an exponential decay constant of |cf|) so that the
    integrand has dropped below 1e-12.
    """
    xs = np.asarray(xs, dtype=float)
    if T is None:
        if decay_rate is None or decay_rate <= 0:
            raise ValueError("need either T or a positive decay_rate")
        T = 30.0 / decay_rate
    ts = np.arange(-T, T + dt / 2, dt)
    vals = np.asarray(cf(ts), dtype=complex)
    if max(abs(vals[0]), abs(vals[-1])) >= 1e-12:
        raise TailNotDecayed(
            f"|cf| at the cutoff T={T} is {max(abs(vals[0]), abs(vals[-1])):.2e}")
    density = np.empty(len(xs))
    max_imag = 0.0
    chunk = max(1, int(2e7 / len(ts)))
    for i in range(0, len(xs), chunk):
        block = xs[i:i + chunk, None]
        integrand = np.exp(-1j * block * ts[None, :]) * vals[None, :]
        est = np.trapezoid(integrand, dx=dt, axis=1) / (2 * math.pi)
        max_imag = max(max_imag, float(np.abs(est.imag).max()))
        density[i:i + chunk] = est.real
    if max_imag > imag_tol:
        raise InversionError(f"imaginary residue {max_imag:.2e} exceeds {imag_tol}")
    mean_grid = float(np.trapezoid(xs * density, xs))
    mean = cf_mean(cf)
    k = int(np.argmax(density))
    if 0 < k < len(xs) - 1:
        y0, y1, y2 = density[k - 1], density[k], density[k + 1]
        denom = y0 - 2 * y1 + y2
        shift = 0.5 * (y0 - y2) / denom if denom else 0.0
        argmax = xs[k] + shift * (xs[1] - xs[0])
    else:
        argmax = float(xs[k])
    return DensityGrid(xs, density, mean, mean_grid, float(argmax), max_imag)
