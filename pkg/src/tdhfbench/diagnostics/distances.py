"""Trace-norm and Hilbert-Schmidt distances between one-body densities."""

from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-10


class DiagnosticsError(ValueError):
    pass


def trace_distance(gamma: np.ndarray, p: np.ndarray) -> tuple[float, float]:
    """(||gamma - p||_1, ||gamma - p||_HS) for Hermitian matrices of equal size."""
    gamma = np.asarray(gamma)
    p = np.asarray(p)
    if gamma.shape != p.shape or gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1]:
        raise DiagnosticsError(f"shape mismatch: {gamma.shape} vs {p.shape}")
    for name, m in (("gamma", gamma), ("p", p)):
        defect = np.abs(m - m.conj().T).max(initial=0.0)
        if defect > HERMITIAN_TOL:
            raise DiagnosticsError(f"{name} is not Hermitian (defect {defect:.2e})")
    diff = gamma - p
    diff = 0.5 * (diff + diff.conj().T)
    ev = np.linalg.eigvalsh(diff)
    return float(np.abs(ev).sum()), float(np.linalg.norm(diff))
