"""Exact propagation psi_t = exp(-i t H) psi_0."""

from __future__ import annotations

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from tdhfbench.fock.operators import ManyBodyState

DENSE_LIMIT = 512


class PropagationError(RuntimeError):
    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (achieved residual {residual:.3e})")
        self.residual = residual


class SpectralPropagator:
    """Full diagonalisation of a Hermitian H; exact phases at any time."""

    def __init__(self, H):
        dense = H.toarray() if sp.issparse(H) else np.asarray(H)
        self.energies, self.vectors = np.linalg.eigh(dense)

    def __call__(self, amplitudes: np.ndarray, t: float) -> np.ndarray:
        c = self.vectors.conj().T @ amplitudes
        return self.vectors @ (np.exp(-1j * t * self.energies) * c)


def _lanczos(matvec, v: np.ndarray, m: int):
    n = v.size
    beta0 = np.linalg.norm(v)
    Q = np.zeros((n, m + 1), dtype=complex)
    alpha = np.zeros(m)
    beta = np.zeros(m)
    Q[:, 0] = v / beta0
    for k in range(m):
        w = matvec(Q[:, k])
        alpha[k] = np.vdot(Q[:, k], w).real
        w = w - alpha[k] * Q[:, k] - (beta[k - 1] * Q[:, k - 1] if k else 0)
        # full reorthogonalisation keeps the small Krylov bases clean
        w -= Q[:, : k + 1] @ (Q[:, : k + 1].conj().T @ w)
        beta[k] = np.linalg.norm(w)
        if beta[k] < 1e-14 * max(1.0, abs(alpha[k])):
            return Q[:, : k + 1], alpha[: k + 1], beta[: k + 1], beta0, True
        Q[:, k + 1] = w / beta[k]
    return Q, alpha, beta, beta0, False


def krylov_expmv(H, v: np.ndarray, t: float, tol: float = 1e-12, m: int = 30) -> tuple[np.ndarray, float]:
    """exp(-i t H) v for Hermitian H by Lanczos with adaptive substeps.

    Each substep ``tau`` is accepted when the a-posteriori error estimate
    ``beta_m |e_m^T exp(-i tau T_m) e_1|`` is below ``tol * |tau| / |t|``;
    otherwise the substep is halved. Returns the vector and the accumulated
    error estimate.
    """
    matvec = (lambda x: H @ x)
    m = max(2, min(m, v.size))
    out = np.array(v, dtype=complex)
    if t == 0:
        return out, 0.0
    remaining = float(t)
    direction = np.sign(t)
    tau = remaining
    total_err = 0.0
    budget = tol / abs(t)
    halvings = 0
    while abs(remaining) > 0:
        tau = direction * min(abs(tau), abs(remaining))
        nrm = np.linalg.norm(out)
        if nrm == 0:
            return out, total_err
        Q, alpha, beta, beta0, invariant = _lanczos(matvec, out, m)
        k = alpha.size
        T = np.diag(alpha) + np.diag(beta[: k - 1], 1) + np.diag(beta[: k - 1], -1)
        while True:
            small = sla.expm(-1j * tau * T)[:, 0]
            err = 0.0 if invariant else beta0 * beta[k - 1] * abs(small[-1])
            if err <= budget * abs(tau) or abs(tau) < 1e-14 * abs(t):
                break
            tau /= 2
            halvings += 1
            if halvings > 200:
                raise PropagationError("Krylov substepping did not converge", err)
        if err > max(budget * abs(tau), tol):
            raise PropagationError("Krylov step below minimum size without convergence", err)
        out = beta0 * (Q[:, :k] @ small)
        total_err += err
        remaining -= tau
        tau *= 2  # try a larger step next time
    return out, total_err


def propagate_exact(
    H, psi: ManyBodyState, t: float, tol: float = 1e-12, method: str = "auto"
) -> ManyBodyState:
    """exp(-i t H) psi by full diagonalisation (dim < 512) or Lanczos-Krylov."""
    dim = psi.basis.dim
    if method == "auto":
        method = "dense" if dim < DENSE_LIMIT else "krylov"
    if t == 0:
        return psi.with_amplitudes(psi.amplitudes.copy())
    if method == "dense":
        amps = SpectralPropagator(H)(psi.amplitudes, t)
    elif method == "krylov":
        amps, _ = krylov_expmv(sp.csr_matrix(H), psi.amplitudes, t, tol=tol)
    else:
        raise ValueError(f"unknown propagation method {method!r}")
    return psi.with_amplitudes(amps)
