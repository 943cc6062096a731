"""Slater determinants and reduced density matrices."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from tdhfbench.fock.basis import FockBasis, FockError, one_body_table, two_body_table
from tdhfbench.fock.operators import ManyBodyState

ORTHONORMAL_TOL = 1e-10


def gram_defect(orbitals: np.ndarray) -> float:
    orbitals = np.asarray(orbitals)
    G = orbitals.conj().T @ orbitals
    return float(np.abs(G - np.eye(G.shape[0])).max(initial=0.0))


def slater_state(orbitals: np.ndarray, basis: FockBasis) -> ManyBodyState:
    """phi_1 ^ ... ^ phi_N with phi_k the k-th column of ``orbitals``.

    The amplitude on basis state ``I`` is the minor ``det(orbitals[I, :])``.
    """
    orbitals = np.asarray(orbitals, dtype=complex)
    if orbitals.shape != (basis.d, basis.N):
        raise FockError(f"orbital matrix must be {basis.d}x{basis.N}, got {orbitals.shape}")
    defect = gram_defect(orbitals)
    if defect > ORTHONORMAL_TOL:
        raise FockError(f"orbitals are not orthonormal (Gram defect {defect:.3e})")
    occ = basis.occupations()
    amps = np.linalg.det(orbitals[occ, :]) if basis.N else np.ones(1, dtype=complex)
    return ManyBodyState(basis, amps)


def one_body_density(psi: ManyBodyState) -> np.ndarray:
    """gamma with Tr[gamma A] = <psi, dGamma(A) psi>, i.e. gamma_ij = <a*_j a_i>."""
    basis, v = psi.basis, psi.amplitudes
    t = one_body_table(basis.d, basis.N)
    G = np.zeros((basis.d, basis.d), dtype=complex)
    np.add.at(G, (t.i, t.j), t.sign * np.conj(v[t.dst]) * v[t.src])
    return G.T


def two_body_tensor(psi: ManyBodyState) -> np.ndarray:
    """``Gamma[r, s, p, q] = <a*_p a*_q a_s a_r>``.

    As a d^2 x d^2 matrix (rows (r, s), columns (p, q)) it satisfies
    Tr[Gamma B] = <psi, dGamma^(2)(B) psi> for every two-body B.
    """
    basis, v = psi.basis, psi.amplitudes
    d = basis.d
    G = np.zeros((d, d, d, d), dtype=complex)
    if basis.N >= 2:
        t = two_body_table(d, basis.N)
        np.add.at(G, (t.r, t.s, t.p, t.q), t.sign * np.conj(v[t.dst]) * v[t.src])
    return G


def antisymmetric_pairs(d: int) -> list[tuple[int, int]]:
    return list(combinations(range(d), 2))


def reduced_density(psi: ManyBodyState, k: int) -> np.ndarray:
    """Reduced k-particle density matrix (k = 1 or 2), trace N!/(N-k)!.

    For k = 2 the matrix is expressed on the antisymmetric two-particle space
    in the orthonormal basis ``(e_p ^ e_q)``, ``p < q`` (see
    :func:`antisymmetric_pairs`).
    """
    if k == 1:
        return one_body_density(psi)
    if k == 2:
        G = two_body_tensor(psi)
        pairs = antisymmetric_pairs(psi.basis.d)
        if not pairs:
            return np.zeros((0, 0), dtype=complex)
        a = np.array([p for p, _ in pairs])
        b = np.array([q for _, q in pairs])
        # <pq|_A Gamma |rs>_A summed over the four antisymmetrised entries = 2 Gamma
        return 2.0 * G[a[:, None], b[:, None], a[None, :], b[None, :]]
    raise FockError(f"reduced density only for k in {{1, 2}}, got {k}")


def projector_from_orbitals(orbitals: np.ndarray) -> np.ndarray:
    orbitals = np.asarray(orbitals)
    return orbitals @ orbitals.conj().T
