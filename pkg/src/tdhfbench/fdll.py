"""Ball-overlap decomposition of radial pair potentials.

A radial potential is written as a superposition over radii ``r`` of the
overlap volume of two balls of radius ``r/2`` whose centres are ``|x|`` apart,
weighted by ``g_v(r)``. For Coulomb the weight is ``16 / (pi r^5)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

COULOMB_WEIGHT = 16.0 / np.pi


class FdllError(ValueError):
    pass


def ball_overlap(s, r):
    """Volume of the intersection of two balls of radius r/2 at centre distance s."""
    s = np.asarray(s, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(s < 0) or np.any(r <= 0):
        raise FdllError("ball_overlap needs s >= 0 and r > 0")
    out = np.pi / 12.0 * (r - s) ** 2 * (s + 2.0 * r)
    return np.where(s <= r, out, 0.0)


@dataclass(frozen=True)
class RadialPotential:
    """v(r) for r > 0 with up to three derivatives.

    Missing derivatives are estimated by central differences (two step sizes;
    disagreement raises :class:`FdllError`).
    """

    value: Callable[[np.ndarray], np.ndarray]
    d1: Callable | None = None
    d2: Callable | None = None
    d3: Callable | None = None
    mu: float | None = None
    name: str = "custom"
    tail_coefficient: float | None = None  # g_v(r) ~ c r^-5 at large r, if a power law

    def derivative(self, order: int, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        fn = (self.value, self.d1, self.d2, self.d3)[order]
        if fn is not None:
            return np.asarray(fn(r), dtype=float)
        return _fd_derivative(self.value, order, r)


# five-point central stencils at offsets -2..2
_FD_WEIGHTS = {
    1: np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0,
    2: np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0,
    3: np.array([-0.5, 1.0, 0.0, -1.0, 0.5]),
}


def _fd_once(f, order: int, r: np.ndarray, h: np.ndarray) -> np.ndarray:
    offsets = np.arange(-2, 3)
    pts = r[..., None] + offsets * h[..., None]
    return (f(pts) * _FD_WEIGHTS[order]).sum(axis=-1) / h**order


def _fd_derivative(f, order: int, r: np.ndarray, rtol: float = 1e-5) -> np.ndarray:
    if order == 0:
        return np.asarray(f(r), dtype=float)
    h = 2e-3 * r
    coarse = _fd_once(f, order, r, h)
    fine = _fd_once(f, order, r, h / 2)
    # Richardson extrapolation for the O(h^2)/O(h^4) stencils
    p = 2 if order == 3 else 4
    est = fine + (fine - coarse) / (2**p - 1)
    err = np.abs(fine - coarse)
    floor = 1e-12 * np.max(np.abs(est), initial=0.0)
    bad = (err > 1e2 * rtol * np.abs(est)) & (err > floor)
    if np.any(bad) or not np.all(np.isfinite(est)):
        worst = np.max(err[bad] / np.abs(est[bad]), initial=np.inf)
        raise FdllError(
            f"finite-difference estimate of derivative {order} did not converge "
            f"(max relative change {worst:.2e})"
        )
    return est


def coulomb_potential() -> RadialPotential:
    return RadialPotential(
        value=lambda r: 1.0 / r,
        d1=lambda r: -1.0 / r**2,
        d2=lambda r: 2.0 / r**3,
        d3=lambda r: -6.0 / r**4,
        mu=0.0,
        name="coulomb",
        tail_coefficient=COULOMB_WEIGHT,
    )


def yukawa_potential(screening: float = 1.0) -> RadialPotential:
    """exp(-k r) / r and its derivatives in closed form."""
    k = float(screening)
    if k <= 0:
        raise FdllError("screening must be positive")

    def e(r):
        return np.exp(-k * r)

    return RadialPotential(
        value=lambda r: e(r) / r,
        d1=lambda r: -e(r) * (k * r + 1) / r**2,
        d2=lambda r: e(r) * (k**2 * r**2 + 2 * k * r + 2) / r**3,
        d3=lambda r: -e(r) * (k**3 * r**3 + 3 * k**2 * r**2 + 6 * k * r + 6) / r**4,
        mu=0.0,
        name=f"yukawa(k={k:g})",
    )


def literal_weight(v: RadialPotential, r) -> np.ndarray:
    """(2/pi) d/dr (v''(r) / r) evaluated as written."""
    r = np.asarray(r, dtype=float)
    return 2.0 / np.pi * (v.derivative(3, r) / r - v.derivative(2, r) / r**2)


@dataclass(frozen=True)
class RadialWeight:
    fn: Callable[[np.ndarray], np.ndarray]
    tail_coefficient: float | None = None
    r_cut: float | None = None  # weight treated as zero above r_cut

    def __call__(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        out = np.asarray(self.fn(r), dtype=float)
        if self.r_cut is not None:
            out = np.where(r <= self.r_cut, out, 0.0)
        return out

    def truncated(self, r_cut: float) -> "RadialWeight":
        return RadialWeight(self.fn, None, r_cut)


def coulomb_weight() -> RadialWeight:
    return RadialWeight(lambda r: COULOMB_WEIGHT / r**5, COULOMB_WEIGHT)


@lru_cache(maxsize=8)
def _gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


@dataclass(frozen=True)
class FdllQuadrature:
    """Gauss-Legendre nodes in log r on [s (1 + 1e-12), ratio * s] plus analytic tail."""

    n: int = 400
    ratio: float = 1e4
    tail: bool = True

    def nodes(self, s: float) -> tuple[np.ndarray, np.ndarray]:
        x, w = _gauss_legendre(self.n)
        if not (self.n > 0 and self.ratio > 1):
            raise FdllError("quadrature needs n > 0 and ratio > 1")
        lo, hi = np.log(s * (1 + 1e-12)), np.log(self.ratio * s)
        u = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
        r = np.exp(u)
        return r, 0.5 * (hi - lo) * w * r  # dr = r du


def _power_tail(c: float, s: float, R: float) -> float:
    # int_R^inf c r^-5 (pi/12)(2 r^3 - 3 s r^2 + s^3) dr
    return c * np.pi / 12.0 * (2.0 / R - 1.5 * s / R**2 + s**3 / (4.0 * R**4))


@dataclass(frozen=True)
class Reconstruction:
    value: float
    tail: float
    residual_estimate: float


def reconstruct_potential(
    x_norm: float, g_v: RadialWeight, quad: FdllQuadrature | None = None, tol: float = 1e-6
) -> Reconstruction:
    """int_0^inf g_v(r) ball_overlap(|x|, r) dr (the integrand vanishes for r <= |x|)."""
    if not x_norm > 0:
        raise FdllError(f"reconstruction needs |x| > 0, got {x_norm}")
    quad = quad or FdllQuadrature()
    s = float(x_norm)
    r, w = quad.nodes(s)
    body = float(np.sum(w * g_v(r) * ball_overlap(s, r)))
    R = quad.ratio * s
    if g_v.r_cut is not None and g_v.r_cut <= s:
        return Reconstruction(0.0, 0.0, 0.0)
    tail = 0.0
    if quad.tail and g_v.tail_coefficient is not None and (g_v.r_cut is None or g_v.r_cut > R):
        tail = _power_tail(g_v.tail_coefficient, s, R)
        resid = 0.0
    else:
        # crude bound: |g(R)| R^5 times the power-law tail shape
        resid = abs(_power_tail(float(np.abs(g_v(np.array([R])))[0]) * R**5, s, R))
    value = body + tail
    if resid > tol * max(abs(value), 1e-300):
        raise FdllError(f"quadrature tail not resolved (estimate {resid:.3e})")
    return Reconstruction(value, tail, resid)


@dataclass(frozen=True)
class WeightReport:
    weight: RadialWeight
    sign: int
    r: np.ndarray
    g: np.ndarray
    margin: np.ndarray  # 16/(pi r^5) - |g_v(r)|
    decay: dict  # m -> |r^m v^(m)(r)| at increasing r
    decay_ok: bool
    moment_limit_ok: bool


def weight_from_potential(
    v: RadialPotential,
    r_grid: np.ndarray | None = None,
    calibration_point: float = 1.0,
    quad: FdllQuadrature | None = None,
) -> WeightReport:
    """Weight g_v for ``v`` with sign fixed by reconstructing v at one radius.

    The literal expression (2/pi)(v''/r)' yields -16/(pi r^5) for 1/r while the
    reconstruction identity needs +16/(pi r^5); the sign that reproduces
    ``v(calibration_point)`` is used and reported.
    """
    r_grid = np.geomspace(0.1, 10.0, 41) if r_grid is None else np.asarray(r_grid, dtype=float)
    # the sign is decided on the untailed body integral, which is accurate to
    # well under one percent and cannot confuse +v with -v
    body = reconstruct_potential(
        calibration_point,
        RadialWeight(lambda r: literal_weight(v, r)),
        FdllQuadrature(tail=False),
        tol=np.inf,
    ).value
    target = float(v.value(np.array(calibration_point)))
    sign = 1 if abs(body - target) <= abs(body + target) else -1
    weight = RadialWeight(lambda r, _s=sign: _s * literal_weight(v, r), v.tail_coefficient)
    g = weight(r_grid)
    margin = COULOMB_WEIGHT / r_grid**5 - np.abs(g)

    big = np.array([1e2, 1e4, 1e6])
    decay = {m: np.abs(big**m * v.derivative(m, big)) for m in range(3)}
    decay_ok = all(vals[-1] <= 1e-3 * vals[0] or vals[-1] < 1e-12 for vals in decay.values())
    # int_1^R r^3 g_v dr should settle as R grows
    moments = []
    xg, wg = np.polynomial.legendre.leggauss(200)
    for R in (1e3, 1e6):
        half = 0.5 * np.log(R)
        x = np.exp(half * (xg + 1.0))
        moments.append(float(np.sum(half * wg * x**4 * weight(x))))
    moment_limit_ok = abs(moments[1] - moments[0]) <= 1e-2 * max(abs(moments[1]), 1e-12)
    return WeightReport(weight, sign, r_grid, g, margin, decay, decay_ok, moment_limit_ok)
