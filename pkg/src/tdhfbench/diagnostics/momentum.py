"""Rate of change of the mean momentum per particle under TDHF."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tdhfbench.diagnostics.distances import DiagnosticsError
from tdhfbench.model import FiniteBasisModel
from tdhfbench.tdhf import mean_field_hamiltonian


def lattice_gradient(d: int, spacing: float, boundary: str = "hard_wall") -> np.ndarray:
    """Central-difference derivative D; the momentum is P = -i D."""
    D = (np.eye(d, k=1) - np.eye(d, k=-1)) / (2.0 * spacing)
    if boundary == "periodic" and d > 2:
        D[0, -1] = -1.0 / (2.0 * spacing)
        D[-1, 0] = 1.0 / (2.0 * spacing)
    elif boundary not in ("hard_wall", "periodic"):
        raise DiagnosticsError(f"unknown boundary {boundary!r}")
    return D


def momentum_operator(model: FiniteBasisModel) -> np.ndarray:
    if model.kernel is None or "spacing" not in model.meta:
        raise DiagnosticsError("momentum drift needs a lattice model")
    return -1j * lattice_gradient(model.d, model.meta["spacing"], model.meta.get("boundary", "hard_wall"))


@dataclass(frozen=True)
class MomentumDrift:
    rate: float  # d/dt N^-1 Tr[p P] under the full TDHF flow (signed)
    drift: float  # |rate|
    direct_drift: float  # contribution of the direct term lam v * f alone
    bound: float  # 3 lam N^-1 sum_ij v_ij^2 f_i f_j

    @property
    def slack(self) -> float:
        return self.bound - self.direct_drift


def momentum_drift(model: FiniteBasisModel, p: np.ndarray, exchange: bool = True) -> MomentumDrift:
    """N^-1 |d/dt Tr[p P]| = N^-1 |Tr(p [h_HF, P])| and the bound on its direct part.

    The free and external parts of h_HF are the leading-order free evolution
    and are not covered by the bound; only the direct-term contribution is
    compared with it.
    """
    P = momentum_operator(model)
    N = float(np.trace(p).real)
    if N <= 0:
        raise DiagnosticsError("empty projector")
    hhf = mean_field_hamiltonian(model, p, exchange)
    rate = (1j * np.trace(p @ (hhf @ P - P @ hhf))).real / N
    occ = np.diag(p).real
    W = model.lam * np.diag(model.kernel @ occ)
    direct = abs(np.trace(p @ (W @ P - P @ W))) / N
    bound = 3.0 * model.lam * float(occ @ (model.kernel**2) @ occ) / N
    return MomentumDrift(float(rate), abs(float(rate)), float(direct), bound)


def mean_momentum(model: FiniteBasisModel, p: np.ndarray) -> float:
    P = momentum_operator(model)
    return float(np.trace(p @ P).real / np.trace(p).real)
