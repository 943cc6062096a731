"""The interaction terms whose sum gives the time derivative of S_g.

With P0 = p x p, P1 = q x p + p x q and P2 = q x q acting on pairs,

    T1 = Im <Psi[1], (dG2(P1 v P0) - 2 dG(q v_HF p)) Psi[-1]>
    T2 = Im <Psi[2], dG2(P2 v P0) Psi[-2]>
    T3 = Im <Psi[1], dG2(P2 v P1) Psi[-1]>

and dS_g/dt = lam (T1 + T2 + T3) when psi follows the Schroedinger flow and
p the TDHF flow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tdhfbench.diagnostics.distances import DiagnosticsError
from tdhfbench.fock import (
    ManyBodyState,
    WeightFunction,
    counting_components,
    dgamma2_matrix,
    dgamma_matrix,
    evaporation_degree,
)
from tdhfbench.model import FiniteBasisModel
from tdhfbench.tdhf import mean_field_potential, propagate_accurate


@dataclass(frozen=True)
class GronwallTerms:
    T1: float
    T2: float
    T3: float

    @property
    def total(self) -> float:
        return self.T1 + self.T2 + self.T3


def pair_projectors(p: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """P0, P1, P2 on the d^2-dimensional pair space."""
    q = np.eye(p.shape[0]) - p
    return np.kron(p, p), np.kron(q, p) + np.kron(p, q), np.kron(q, q)


def gronwall_decomposition(
    psi: ManyBodyState,
    p: np.ndarray,
    model: FiniteBasisModel,
    g: WeightFunction,
    exchange: bool = True,
) -> GronwallTerms:
    if not g.monotone:
        raise DiagnosticsError("the weight must be monotone nondecreasing")
    basis = psi.basis
    d = basis.d
    comps = counting_components(psi, p)
    q = np.eye(d) - p
    P0, P1, P2 = pair_projectors(p)
    V = model.two_body().reshape(d * d, d * d)
    vhf = mean_field_potential(model, p, exchange)

    up1, dn1 = comps.weighted(1, g), comps.weighted(-1, g)
    up2, dn2 = comps.weighted(2, g), comps.weighted(-2, g)
    A = dgamma2_matrix(P1 @ V @ P0, basis) - 2.0 * dgamma_matrix(q @ vhf @ p, basis)
    T1 = np.vdot(up1, A @ dn1).imag
    T2 = np.vdot(up2, dgamma2_matrix(P2 @ V @ P0, basis) @ dn2).imag
    T3 = np.vdot(up1, dgamma2_matrix(P2 @ V @ P1, basis) @ dn1).imag
    return GronwallTerms(float(T1), float(T2), float(T3))


def commutator_form(
    psi: ManyBodyState, p: np.ndarray, model: FiniteBasisModel, g: WeightFunction, exchange: bool = True
) -> float:
    """-2 Im <psi, W g(dG(q)) psi> with W = dG2(v)/2 - dG(v_HF); equals T1 + T2 + T3."""
    basis = psi.basis
    comps = counting_components(psi, p)
    W = 0.5 * dgamma2_matrix(model.two_body(), basis) - dgamma_matrix(
        mean_field_potential(model, p, exchange), basis
    )
    return float(-2.0 * np.vdot(psi.amplitudes, W @ comps.apply(g)).imag)


def fd_evaporation_rate(
    propagator,
    model: FiniteBasisModel,
    psi: ManyBodyState,
    orbitals: np.ndarray,
    g: WeightFunction,
    delta: float = 1e-3,
    exchange: bool = True,
) -> float:
    """Central difference of S_g with both flows advanced by +-delta.

    ``propagator(amps, t)`` must return e^{-itH} amps accurately.
    """
    vals = []
    for sgn in (1.0, -1.0):
        amps = propagator(psi.amplitudes, sgn * delta)
        phi = propagate_accurate(model, orbitals, sgn * delta, exchange=exchange)
        vals.append(evaporation_degree(psi.with_amplitudes(amps), phi @ phi.conj().T, g))
    return (vals[0] - vals[1]) / (2.0 * delta)
