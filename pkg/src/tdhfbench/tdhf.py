"""Time-dependent Hartree-Fock in orbital / density-matrix form."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tdhfbench.model import FiniteBasisModel

ORTHO_ABORT = 1e-6


class TdhfError(RuntimeError):
    pass


@dataclass(frozen=True)
class TdhfState:
    orbitals: np.ndarray  # d x N, orthonormal columns
    t: float = 0.0

    def __post_init__(self):
        phi = np.asarray(self.orbitals, dtype=complex)
        if phi.ndim != 2:
            raise TdhfError("orbitals must be a d x N matrix")
        object.__setattr__(self, "orbitals", phi)

    @property
    def N(self) -> int:
        return self.orbitals.shape[1]

    @property
    def projector(self) -> np.ndarray:
        return self.orbitals @ self.orbitals.conj().T

    def gram_defect(self) -> float:
        G = self.orbitals.conj().T @ self.orbitals
        return float(np.abs(G - np.eye(self.N)).max(initial=0.0))


def mean_field_potential(model: FiniteBasisModel, p: np.ndarray, exchange: bool = True) -> np.ndarray:
    """Tr_2[v (1 - X)(1 x p)]: direct minus exchange at unit coupling."""
    p = np.asarray(p)
    if p.shape != (model.d, model.d):
        raise TdhfError(f"density matrix shape {p.shape} does not match d={model.d}")
    if model.kernel is not None:
        k = model.kernel
        out = np.diag(k @ np.diag(p)).astype(complex)
        if exchange:
            out = out - k * p
        return out
    V = model.two_body()
    out = np.einsum("acbd,dc->ab", V, p)
    if exchange:
        out = out - np.einsum("acdb,dc->ab", V, p)
    return out


def mean_field_hamiltonian(model: FiniteBasisModel, p: np.ndarray, exchange: bool = True) -> np.ndarray:
    """h_HF(p) = h + lam * Tr_2[v (1 - X)(1 x p)]."""
    hhf = model.h + model.lam * mean_field_potential(model, p, exchange)
    return 0.5 * (hhf + hhf.conj().T)


def _unitary(H: np.ndarray, dt: float) -> np.ndarray:
    w, U = np.linalg.eigh(H)
    return (U * np.exp(-1j * dt * w)) @ U.conj().T


def _reorthonormalize(phi: np.ndarray) -> np.ndarray:
    Q, R = np.linalg.qr(phi)
    phases = np.diag(R) / np.abs(np.diag(R))
    return Q * phases


def _step(model: FiniteBasisModel, phi: np.ndarray, dt: float, exchange: bool) -> np.ndarray:
    """One exponential-midpoint step with one fixed-point refinement (signed dt)."""
    p0 = phi @ phi.conj().T
    U = _unitary(mean_field_hamiltonian(model, p0, exchange), dt)
    trial = U @ phi
    p_mid = 0.5 * (p0 + trial @ trial.conj().T)
    U = _unitary(mean_field_hamiltonian(model, p_mid, exchange), dt)
    return U @ phi


def advance(model: FiniteBasisModel, phi: np.ndarray, dt: float, steps: int, exchange: bool = True) -> np.ndarray:
    """Integrate the orbitals over ``steps`` steps of signed size ``dt``."""
    for _ in range(steps):
        phi = _step(model, phi, dt, exchange)
        defect = np.abs(phi.conj().T @ phi - np.eye(phi.shape[1])).max(initial=0.0)
        if defect > ORTHO_ABORT:
            raise TdhfError(f"orbital orthonormality lost (Gram defect {defect:.3e})")
        phi = _reorthonormalize(phi)
    return phi


def propagate_tdhf(
    model: FiniteBasisModel,
    state: TdhfState,
    dt: float,
    steps: int,
    exchange: bool = True,
) -> TdhfState:
    """Advance i d/dt p = [h_HF(p), p] by ``steps`` unitary midpoint steps."""
    if not dt > 0:
        raise TdhfError(f"time step must be positive, got {dt}")
    if state.gram_defect() > 1e-10:
        raise TdhfError(f"initial orbitals not orthonormal (Gram defect {state.gram_defect():.3e})")
    phi = advance(model, state.orbitals, dt, steps, exchange)
    return TdhfState(phi, state.t + steps * dt)


def propagate_accurate(
    model: FiniteBasisModel, phi: np.ndarray, span: float, substep: float = 1e-4, exchange: bool = True
) -> np.ndarray:
    """Orbitals after a signed time ``span`` using substeps no longer than ``substep``."""
    if span == 0:
        return phi.copy()
    n = max(1, int(np.ceil(abs(span) / substep - 1e-9)))
    return advance(model, phi, span / n, n, exchange)


@dataclass(frozen=True)
class HfObservables:
    t: float
    energy: float
    kinetic: float  # Tr[-Delta p]
    kinetic_energy: float  # Tr[a (-Delta) p], the kinetic part of Tr[h p]
    one_body: float
    direct: float
    exchange: float


def hf_energy_terms(model: FiniteBasisModel, p: np.ndarray) -> tuple[float, float, float]:
    """(Tr[h p], direct energy D, exchange energy X) with E = nu + Tr[h p] + lam/2 (D - X)."""
    one = float(np.trace(model.h @ p).real)
    if model.kernel is not None:
        dens = np.diag(p).real
        D = float(dens @ model.kernel @ dens)
        X = float(np.sum(model.kernel * np.abs(p) ** 2))
    else:
        V = model.two_body()
        D = float(np.einsum("acbd,ba,dc->", V, p, p).real)
        X = float(np.einsum("acdb,ba,dc->", V, p, p).real)
    return one, D, X


def hf_observables(model: FiniteBasisModel, state: TdhfState, exchange: bool = True) -> HfObservables:
    p = state.projector
    one, D, X = hf_energy_terms(model, p)
    X_used = X if exchange else 0.0
    energy = model.nu + one + 0.5 * model.lam * (D - X_used)
    if model.laplacian is not None:
        K = float(np.trace(model.laplacian @ p).real)
        kin = model.kinetic_prefactor * K
    else:
        K = kin = float("nan")
    return HfObservables(state.t, energy, K, kin, one, D, X)


def lowest_orbitals(h: np.ndarray, N: int) -> np.ndarray:
    _, U = np.linalg.eigh(h)
    return U[:, :N].astype(complex)
