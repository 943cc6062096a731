"""Second-quantised one- and two-body operators on the N-particle sector."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from tdhfbench.fock.basis import FockBasis, FockError, enumerate_basis, one_body_table, two_body_table
from tdhfbench.model import FiniteBasisModel


@dataclass(frozen=True, eq=False)
class ManyBodyState:
    basis: FockBasis
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.basis.dim,):
            raise FockError(
                f"amplitude vector has shape {amps.shape}, basis dimension is {self.basis.dim}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "ManyBodyState":
        return ManyBodyState(self.basis, self.amplitudes / self.norm)

    def with_amplitudes(self, amps: np.ndarray) -> "ManyBodyState":
        return ManyBodyState(self.basis, amps)


def _as_two_body_tensor(B: np.ndarray, d: int) -> np.ndarray:
    B = np.asarray(B)
    if B.shape == (d * d, d * d):
        return B.reshape(d, d, d, d)
    if B.shape != (d, d, d, d):
        raise FockError(f"two-body operator must be (d,d,d,d) or (d^2,d^2); got {B.shape}")
    return B


def dgamma_matrix(A: np.ndarray, basis: FockBasis) -> sp.csr_matrix:
    """Sparse matrix of dGamma(A) = sum_ij A_ij a*_i a_j on the N-particle sector."""
    A = np.asarray(A)
    if A.shape != (basis.d, basis.d):
        raise FockError(f"one-body operator shape {A.shape} does not match d={basis.d}")
    t = one_body_table(basis.d, basis.N)
    vals = t.sign * A[t.i, t.j]
    return sp.csr_matrix((vals, (t.dst, t.src)), shape=(basis.dim, basis.dim))


def dgamma2_matrix(B: np.ndarray, basis: FockBasis) -> sp.csr_matrix:
    """Sparse matrix of dGamma^(2)(B) = sum_{j != k} B_jk.

    With ``B[p, q, r, s] = <p q| B |r s>`` this is
    ``sum_pqrs B[p,q,r,s] a*_p a*_q a_s a_r``.
    """
    B = _as_two_body_tensor(B, basis.d)
    t = two_body_table(basis.d, basis.N)
    vals = t.sign * B[t.p, t.q, t.r, t.s]
    return sp.csr_matrix((vals, (t.dst, t.src)), shape=(basis.dim, basis.dim))


def _vector(psi) -> tuple[FockBasis, np.ndarray]:
    return psi.basis, psi.amplitudes


def dgamma_apply(A: np.ndarray, psi: ManyBodyState) -> np.ndarray:
    """dGamma(A) psi as an (unnormalised) amplitude vector."""
    basis, v = _vector(psi)
    return dgamma_matrix(A, basis) @ v


def dgamma2_apply(B: np.ndarray, psi: ManyBodyState) -> np.ndarray:
    basis, v = _vector(psi)
    return dgamma2_matrix(B, basis) @ v


def pair_interaction_diagonal(kernel: np.ndarray, basis: FockBasis) -> np.ndarray:
    """sum_{p<q occupied} kernel[p, q] for every basis state."""
    occ = basis.occupations()
    if basis.N < 2:
        return np.zeros(basis.dim)
    a, b = np.triu_indices(basis.N, k=1)
    return kernel[occ[:, a], occ[:, b]].sum(axis=1)


def build_many_body_hamiltonian(model: FiniteBasisModel, basis: FockBasis) -> sp.csr_matrix:
    """H = nu + dGamma(h) + lam * sum_{j<k} v_jk on the occupation basis."""
    if model.d != basis.d:
        raise FockError(f"model has d={model.d} but basis has d={basis.d}")
    H = dgamma_matrix(model.h, basis)
    if model.lam != 0.0:
        if model.kernel is not None:
            H = H + sp.diags(model.lam * pair_interaction_diagonal(model.kernel, basis))
        else:
            H = H + 0.5 * model.lam * dgamma2_matrix(model.two_body(), basis)
    if model.nu != 0.0:
        H = H + model.nu * sp.identity(basis.dim, format="csr")
    return sp.csr_matrix(H)


def expectation(op, psi: ManyBodyState) -> complex:
    v = psi.amplitudes
    return complex(np.vdot(v, op @ v))


__all__ = [
    "ManyBodyState",
    "build_many_body_hamiltonian",
    "dgamma_apply",
    "dgamma2_apply",
    "dgamma_matrix",
    "dgamma2_matrix",
    "enumerate_basis",
    "expectation",
]
