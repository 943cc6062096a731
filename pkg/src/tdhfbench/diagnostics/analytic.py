"""Lieb-Thirring, Hardy and sup-norm estimates on radial 3D densities."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from tdhfbench.diagnostics.bounds import C_LT
from tdhfbench.diagnostics.distances import DiagnosticsError


@dataclass(frozen=True)
class RadialDensity:
    """f(r) of a one-particle density together with Tr[-Delta gamma]."""

    name: str
    f: object  # callable r -> f(r), or None for the zero density
    kinetic: float
    closed_form: dict | None = None  # keys: mass, int53, hardy, newton
    grid: np.ndarray | None = None  # tabulation nodes; f vanishes beyond the last

    def radial_integral(self, fn) -> float:
        if self.f is None:
            return 0.0
        if self.grid is not None:
            # piecewise-linear data: composite Simpson on a refined copy of the grid
            r = np.interp(np.linspace(0, self.grid.size - 1, 8 * (self.grid.size - 1) + 1),
                          np.arange(self.grid.size), self.grid)
            return float(integrate.simpson([4.0 * math.pi * x * x * fn(x) for x in r], x=r))
        val, _ = integrate.quad(lambda r: 4.0 * math.pi * r * r * fn(r), 0.0, math.inf, limit=200,
                                epsabs=0.0, epsrel=1e-13)
        return val


def gaussian_density(a: float = 1.0) -> RadialDensity:
    """|phi|^2 for phi = (2a/pi)^(3/4) exp(-a r^2); kinetic energy 3a."""
    if a <= 0:
        raise DiagnosticsError("Gaussian exponent must be positive")
    c = (2.0 * a / math.pi) ** 1.5
    closed = {
        "mass": 1.0,
        "int53": (2.0 * a / math.pi) ** 2.5 * (3.0 * math.pi / (10.0 * a)) ** 1.5,
        "hardy": 4.0 * a,
        "newton": c * math.pi / a,
    }
    return RadialDensity(f"gaussian(a={a:g})", lambda r: c * math.exp(-2.0 * a * r * r), 3.0 * a, closed)


def hydrogenic_density() -> RadialDensity:
    """1s density exp(-2r)/pi with kinetic energy 1."""
    closed = {
        "mass": 1.0,
        "int53": 4.0 * math.pi ** (-2.0 / 3.0) * 2.0 / (10.0 / 3.0) ** 3,
        "hardy": 2.0,
        "newton": 1.0,
    }
    return RadialDensity("hydrogenic-1s", lambda r: math.exp(-2.0 * r) / math.pi, 1.0, closed)


def zero_density() -> RadialDensity:
    return RadialDensity("zero", None, 0.0, {"mass": 0.0, "int53": 0.0, "hardy": 0.0, "newton": 0.0})


def tabulated_density(r: np.ndarray, f: np.ndarray, kinetic: float, name: str = "tabulated") -> RadialDensity:
    """Density given on a radial grid (linear interpolation, zero outside)."""
    r = np.asarray(r, dtype=float)
    f = np.asarray(f, dtype=float)
    if r.ndim != 1 or r.shape != f.shape or np.any(np.diff(r) <= 0) or np.any(f < 0):
        raise DiagnosticsError("tabulated density needs increasing r and nonnegative f of equal length")
    return RadialDensity(name, lambda x: float(np.interp(x, r, f, right=0.0)), kinetic, grid=r)


@dataclass(frozen=True)
class InequalityReport:
    name: str
    kinetic: float
    mass: float
    lt_left: float
    lt_right: float
    hardy_left: float
    hardy_right: float
    sup_left: float  # ||v * f||_inf = int f/|x| for radially decreasing f
    sup_right: float  # min over R of (8 pi)^(2/5) R^(1/5) ||f||_{5/3} + ||f||_1 / R
    R_opt: float
    from_closed_form: bool

    @property
    def slacks(self) -> dict[str, float]:
        return {
            "lieb-thirring": self.lt_right - self.lt_left,
            "hardy": self.hardy_right - self.hardy_left,
            "sup-norm": self.sup_right - self.sup_left,
        }


def sup_norm_bound(f53: float, mass: float) -> tuple[float, float]:
    """min_R A R^(1/5) + B / R with A = (8 pi)^(2/5) ||f||_{5/3}, B = ||f||_1."""
    A = (8.0 * math.pi) ** 0.4 * f53
    B = mass
    if A == 0.0 or B == 0.0:
        return 0.0, math.inf
    R = (5.0 * B / A) ** (5.0 / 6.0)
    return A * R**0.2 + B / R, R


def analytic_inequalities(density: RadialDensity, use_closed_form: bool = True) -> InequalityReport:
    closed = density.closed_form if use_closed_form else None
    if closed is not None:
        mass, int53, hardy, newton = closed["mass"], closed["int53"], closed["hardy"], closed["newton"]
    else:
        fn = density.f
        mass = density.radial_integral(fn) if fn else 0.0
        int53 = density.radial_integral(lambda r: fn(r) ** (5.0 / 3.0)) if fn else 0.0
        hardy = density.radial_integral(lambda r: fn(r) / (r * r) if r > 0 else 0.0) if fn else 0.0
        newton = density.radial_integral(lambda r: fn(r) / r if r > 0 else 0.0) if fn else 0.0
    if not math.isfinite(mass):
        raise DiagnosticsError("density is not normalizable")
    f53 = int53**0.6
    sup_right, R = sup_norm_bound(f53, mass)
    return InequalityReport(
        density.name, density.kinetic, mass,
        C_LT * int53, density.kinetic,
        hardy, 4.0 * density.kinetic,
        newton, sup_right, R,
        closed is not None,
    )
