import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tdhfbench.model import (
    FiniteBasisModel,
    ModelError,
    apply_scaling_preset,
    build_lattice_model,
    check_model_invariants,
    lattice_laplacian,
)


@pytest.mark.parametrize("d,a", [(5, 1.0), (8, 0.3)])
def test_dirichlet_laplacian_spectrum(d, a):
    # discrete sine modes: (2 - 2 cos(k pi / (d + 1))) / a^2
    k = np.arange(1, d + 1)
    exact = (2 - 2 * np.cos(k * np.pi / (d + 1))) / a**2
    assert np.allclose(np.linalg.eigvalsh(lattice_laplacian(d, a)), exact, atol=1e-12)


def test_periodic_laplacian_spectrum():
    d = 7
    k = np.arange(d)
    exact = np.sort(2 - 2 * np.cos(2 * np.pi * k / d))
    assert np.allclose(np.linalg.eigvalsh(lattice_laplacian(d, 1.0, "periodic")), exact, atol=1e-12)


def test_soft_coulomb_kernel_and_mu():
    m = build_lattice_model(4, spacing=0.5, potential="soft_coulomb", softening=1.0, lam=0.2)
    x = np.arange(4) * 0.5
    r = np.abs(x[:, None] - x[None, :])
    assert np.allclose(m.kernel, 1 / np.sqrt(r**2 + 1.0))
    assert m.mu == pytest.approx(m.kernel.min())
    assert m.meta["spacing"] == 0.5
    assert np.allclose(m.kinetic_matrix() + 0, m.h)


def test_attractive_sign_gives_negative_mu():
    m = build_lattice_model(3, potential={"kind": "soft_coulomb", "sign": -1}, lam=1.0)
    assert m.mu < 0


def test_harmonic_external_enters_diagonal():
    m = build_lattice_model(5, external={"kind": "harmonic", "omega": 2.0}, kinetic_prefactor=0.0)
    assert np.allclose(np.diag(m.h), np.diag(m.h).real)
    assert np.count_nonzero(m.h - np.diag(np.diag(m.h))) == 0


@given(st.integers(1, 7), st.floats(0.1, 2.0), st.sampled_from(["soft_coulomb", "yukawa", "gaussian"]))
@settings(max_examples=30, deadline=None)
def test_invariants_hold(d, spacing, kind):
    m = build_lattice_model(d, spacing=spacing, potential=kind, lam=0.5)
    defects = check_model_invariants(m)
    assert all(v <= 1e-12 for v in defects.values())
    # dense tensor agrees with the kernel: V[i,j,i,j] = kernel[i,j]
    V = m.two_body()
    i, j = np.meshgrid(range(d), range(d), indexing="ij")
    assert np.allclose(V[i, j, i, j], m.kernel)


def test_rejects_bad_inputs():
    with pytest.raises(ModelError):
        build_lattice_model(0)
    with pytest.raises(ModelError):
        build_lattice_model(3, spacing=-1)
    with pytest.raises(ModelError):
        build_lattice_model(3, potential="coulomb", softening=0.0)
    with pytest.raises(ModelError):
        build_lattice_model(3, potential="nonsense")
    with pytest.raises(ModelError):
        FiniteBasisModel(h=np.array([[0, 1], [0, 0.0]]), lam=0.0)
    with pytest.raises(ModelError):
        FiniteBasisModel(h=np.eye(2), lam=-1.0)
    V = np.zeros((2, 2, 2, 2))
    V[0, 1, 0, 0] = 1.0
    with pytest.raises(ModelError):
        FiniteBasisModel(h=np.eye(2), lam=1.0, V=V)


def test_model_arrays_are_frozen():
    m = build_lattice_model(3, potential="soft_coulomb", lam=1.0)
    with pytest.raises(ValueError):
        m.h[0, 0] = 5.0


@pytest.mark.parametrize("N", [1, 8, 27])
def test_scaling_presets(N):
    lv = apply_scaling_preset("large-volume", N)
    sc = apply_scaling_preset("semi-classical", N)
    inv = apply_scaling_preset("inverse-N", N)
    assert lv.lam == pytest.approx(N ** (-2 / 3))
    assert sc.kinetic_prefactor == pytest.approx(0.5 / N ** (1 / 3))
    assert inv.lam == pytest.approx(1 / N)
    assert math.isclose(apply_scaling_preset("custom", N, 0.3, 0.7).lam, 0.3)
    with pytest.raises(ModelError):
        apply_scaling_preset("custom", N)
    with pytest.raises(ModelError):
        apply_scaling_preset("bogus", N)
