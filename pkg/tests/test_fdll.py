import math

import mpmath as mp
import numpy as np
import pytest
import sympy as sy
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from tdhfbench.fdll import (
    COULOMB_WEIGHT,
    FdllError,
    FdllQuadrature,
    RadialPotential,
    RadialWeight,
    ball_overlap,
    coulomb_potential,
    coulomb_weight,
    literal_weight,
    reconstruct_potential,
    weight_from_potential,
    yukawa_potential,
)

r_sym, s_sym, k_sym = sy.symbols("r s k", positive=True)


@given(st.floats(0.0, 3.0), st.floats(0.1, 3.0))
@settings(max_examples=40, deadline=None)
def test_ball_overlap_against_slab_integration(s, r):
    # lens volume = 2 * int_{s/2}^{r/2} pi (rho^2 - x^2) dx, rho = r/2
    rho = r / 2
    if s >= r:
        expected = 0.0
    else:
        expected = 2 * integrate.quad(lambda x: math.pi * (rho**2 - x**2), s / 2, rho)[0]
    assert float(ball_overlap(s, r)) == pytest.approx(expected, rel=1e-12, abs=1e-14)


def test_ball_overlap_rejects_bad_arguments():
    with pytest.raises(FdllError):
        ball_overlap(-1.0, 1.0)
    with pytest.raises(FdllError):
        ball_overlap(1.0, 0.0)


def test_coulomb_identity_symbolic():
    # int_s^inf 16/(pi r^5) * pi/12 (r - s)^2 (s + 2r) dr = 1/s
    integrand = 16 / (sy.pi * r_sym**5) * sy.pi / 12 * (r_sym - s_sym) ** 2 * (s_sym + 2 * r_sym)
    assert sy.simplify(sy.integrate(integrand, (r_sym, s_sym, sy.oo)) - 1 / s_sym) == 0


def test_literal_coulomb_weight_has_negative_sign():
    r = np.geomspace(0.1, 10, 9)
    assert np.allclose(literal_weight(coulomb_potential(), r), -COULOMB_WEIGHT / r**5, rtol=1e-14)


@pytest.mark.parametrize("x", [0.25, 0.5, 1.0, 2.0, 5.0])
def test_coulomb_reconstruction(x):
    rec = reconstruct_potential(x, coulomb_weight())
    assert rec.value == pytest.approx(1 / x, rel=1e-12)
    assert rec.tail > 0


@pytest.mark.parametrize("order", [1, 2, 3])
def test_yukawa_derivatives_symbolic(order):
    expr = sy.exp(-k_sym * r_sym) / r_sym
    d = sy.lambdify((r_sym, k_sym), sy.diff(expr, r_sym, order), "numpy")
    r = np.geomspace(0.2, 8, 12)
    for k in (0.5, 2.0):
        assert np.allclose(yukawa_potential(k).derivative(order, r), d(r, k), rtol=1e-12)


def test_finite_difference_fallback():
    v = yukawa_potential(1.0)
    bare = RadialPotential(value=v.value, name="bare")
    r = np.geomspace(0.3, 6, 10)
    for order in (1, 2, 3):
        assert np.allclose(bare.derivative(order, r), v.derivative(order, r), rtol=1e-7)


def test_finite_difference_reports_nonconvergence():
    rough = RadialPotential(value=lambda r: np.abs(np.sin(1e6 * r)))
    with pytest.raises(FdllError):
        rough.derivative(2, np.array([1.0]))


@pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
def test_yukawa_round_trip_against_mpmath(k):
    rep = weight_from_potential(yukawa_potential(k))
    assert rep.sign == -1
    assert rep.decay_ok and rep.moment_limit_ok
    assert np.all(rep.margin >= 0)

    def g(r):
        e = mp.exp(-k * r)
        d2 = e * (k**2 * r**2 + 2 * k * r + 2) / r**3
        d3 = -e * (k**3 * r**3 + 3 * k**2 * r**2 + 6 * k * r + 6) / r**4
        return -2 / mp.pi * (d3 / r - d2 / r**2)

    mp.mp.dps = 30
    for x in (0.5, 1.0, 2.0):
        ref = mp.quad(lambda r: g(r) * mp.pi / 12 * (r - x) ** 2 * (x + 2 * r), [x, x + 1, x + 10, mp.inf])
        assert float(ref) == pytest.approx(math.exp(-k * x) / x, rel=1e-15)
        got = reconstruct_potential(x, rep.weight).value
        assert got == pytest.approx(float(ref), rel=1e-10)


def test_fd_weight_round_trip():
    bare = RadialPotential(value=yukawa_potential(1.0).value, name="bare")
    rep = weight_from_potential(bare)
    assert rep.sign == -1
    assert reconstruct_potential(1.0, rep.weight).value == pytest.approx(math.exp(-1.0), rel=1e-5)


def test_truncated_weight_and_untailed_residual():
    w = coulomb_weight().truncated(3.0)
    assert reconstruct_potential(4.0, w).value == 0.0
    # without a tail formula the unresolved remainder must be reported
    with pytest.raises(FdllError):
        reconstruct_potential(1.0, RadialWeight(lambda r: COULOMB_WEIGHT / r**5), FdllQuadrature(ratio=10.0))


def test_reconstruction_rejects_origin():
    with pytest.raises(FdllError):
        reconstruct_potential(0.0, coulomb_weight())
    with pytest.raises(FdllError):
        yukawa_potential(0.0)
