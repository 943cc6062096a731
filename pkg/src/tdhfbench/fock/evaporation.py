"""Counting projections of dGamma(q) and the degree of evaporation S_g."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tdhfbench.fock.basis import FockBasis, FockError
from tdhfbench.fock.operators import ManyBodyState

PROJECTOR_TOL = 1e-10


@dataclass(frozen=True)
class WeightFunction:
    """Tabulated g(0), ..., g(N), extended by 0 below 0 and by g(N) above N."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size < 1:
            raise FockError("weight table must be a non-empty 1D array")
        if not np.all(np.isfinite(vals)):
            raise FockError("weight values must be finite")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def N(self) -> int:
        return self.values.size - 1

    @property
    def monotone(self) -> bool:
        return bool(np.all(np.diff(self.values) >= 0))

    def __call__(self, m) -> np.ndarray:
        m = np.asarray(m)
        idx = np.clip(m, 0, self.N).astype(int)
        return np.where(m < 0, 0.0, self.values[idx])

    def translated(self, k: int) -> "TranslatedWeight":
        """tau_k g(x) = g(x - k)."""
        return TranslatedWeight(self, k)

    @classmethod
    def identity(cls, N: int) -> "WeightFunction":
        return cls(np.arange(N + 1, dtype=float))


@dataclass(frozen=True)
class TranslatedWeight:
    base: WeightFunction
    shift: int

    def __call__(self, m) -> np.ndarray:
        return self.base(np.asarray(m) - self.shift)


def check_projector(p: np.ndarray, N: int | None = None, tol: float = PROJECTOR_TOL) -> int:
    """Validate a Hermitian orthogonal projector; returns its rank."""
    p = np.asarray(p)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        raise FockError(f"projector must be square, got {p.shape}")
    herm = np.abs(p - p.conj().T).max(initial=0.0)
    idem = np.linalg.norm(p @ p - p)
    rank = int(round(np.trace(p).real))
    if herm > tol or idem > tol or abs(np.trace(p).real - rank) > tol:
        raise FockError(
            f"not an orthogonal projector: Hermiticity defect {herm:.2e}, "
            f"||p^2 - p|| = {idem:.2e}, trace {np.trace(p).real:.12f}"
        )
    if N is not None and rank != N:
        raise FockError(f"projector has rank {rank}, expected {N}")
    return rank


def adapted_orbitals(p: np.ndarray) -> np.ndarray:
    """Unitary whose first rank(p) columns span ran(p) and the rest ran(1 - p)."""
    w, U = np.linalg.eigh(p)
    return U[:, np.argsort(-w, kind="stable")]


def wedge_power(U: np.ndarray, basis: FockBasis) -> np.ndarray:
    """Matrix of Lambda^N(U): entry [I, J] = det(U[I, J])."""
    occ = basis.occupations()
    if basis.N == 0:
        return np.ones((1, 1), dtype=complex)
    sub = U[occ[:, None, :, None], occ[None, :, None, :]]
    return np.linalg.det(sub)


@dataclass(frozen=True)
class WeightedComponents:
    """The resolution psi = sum_m P_m psi by the number of particles outside ran(p)."""

    components: np.ndarray  # (N + 1, dim); row m is P_m psi
    basis: FockBasis

    @property
    def N(self) -> int:
        return self.components.shape[0] - 1

    @property
    def weights(self) -> np.ndarray:
        """||P_m psi||^2 for m = 0..N."""
        return np.einsum("mi,mi->m", self.components.conj(), self.components).real

    def apply(self, f) -> np.ndarray:
        """f(dGamma(q)) psi for a function f on the integers."""
        m = np.arange(self.N + 1)
        return np.asarray(f(m), dtype=float) @ self.components

    def weighted(self, j: int, g: WeightFunction) -> np.ndarray:
        """Psi^[j] for j > 0 uses sqrt(g(m) - g(m - j)); Psi^[-j] uses sqrt(g(m + j) - g(m))."""
        if j == 0:
            raise FockError("weighted states are defined for j != 0")
        m = np.arange(self.N + 1)
        radicand = g(m) - g(m - j) if j > 0 else g(m - j) - g(m)
        if np.any(radicand < -1e-14):
            raise FockError("weight is not monotone: negative radicand in weighted state")
        return np.sqrt(np.clip(radicand, 0.0, None)) @ self.components


def counting_components(psi: ManyBodyState, p: np.ndarray) -> WeightedComponents:
    """P_m psi from a rotation of the occupation basis adapted to ran(p) + ran(q)."""
    basis = psi.basis
    p = np.asarray(p)
    if p.shape != (basis.d, basis.d):
        raise FockError(f"projector shape {p.shape} does not match d={basis.d}")
    check_projector(p, basis.N)
    U = adapted_orbitals(p)
    M = wedge_power(U, basis)
    coeff = M.conj().T @ psi.amplitudes
    outside = (basis.occupations() >= basis.N).sum(axis=1) if basis.N else np.zeros(1, int)
    comps = np.zeros((basis.N + 1, basis.dim), dtype=complex)
    for m in range(basis.N + 1):
        mask = outside == m
        if mask.any():
            comps[m] = M[:, mask] @ coeff[mask]
    return WeightedComponents(comps, basis)


def evaporation_degree(psi: ManyBodyState, p: np.ndarray, g: WeightFunction) -> float:
    """S_g = sum_m g(m) ||P_m psi||^2."""
    comps = counting_components(psi, p)
    return float(g(np.arange(comps.N + 1)) @ comps.weights)


def identity_weight(N: int) -> WeightFunction:
    return WeightFunction.identity(N)


def g_theta(N: int, theta: float) -> WeightFunction:
    """g_theta(x) = N^(1-theta) x on [0, N^theta], N above, tabulated at 0..N."""
    if N < 1:
        raise FockError(f"g_theta needs N >= 1, got {N}")
    if not (0 < theta <= 1):
        raise FockError(f"theta must lie in (0, 1], got {theta}")
    x = np.arange(N + 1, dtype=float)
    knee = N**theta
    # guard against N**theta landing a hair below an integer
    inside = x <= knee * (1 + 1e-12)
    return WeightFunction(np.where(inside, N ** (1 - theta) * x, float(N)))
