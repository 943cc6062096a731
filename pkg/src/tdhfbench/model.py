"""Finite single-particle models and mean-field scaling presets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

import numpy as np

DENSE_TWO_BODY_MAX_D = 16
_SYM_TOL = 1e-12


class ModelError(ValueError):
    pass


def _rel_defect(a: np.ndarray, b: np.ndarray) -> float:
    scale = max(np.abs(a).max(initial=0.0), np.abs(b).max(initial=0.0), 1.0)
    return float(np.abs(a - b).max(initial=0.0) / scale)


def _freeze(a: np.ndarray | None) -> np.ndarray | None:
    if a is None:
        return None
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class FiniteBasisModel:
    """One-body matrix ``h``, two-body matrix elements and coupling.

    ``V[p, q, r, s] = <p q| v |r s>``. Kernel-diagonal models (lattices) keep
    the pair kernel ``kernel[p, q] = v(x_p - x_q)`` and build the dense tensor
    only on demand; ``V`` is stored densely for ``d <= 16``.
    """

    h: np.ndarray
    lam: float
    nu: float = 0.0
    V: np.ndarray | None = None
    kernel: np.ndarray | None = None
    laplacian: np.ndarray | None = None
    kinetic_prefactor: float = 0.5
    meta: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        h = np.asarray(self.h)
        if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] < 1:
            raise ModelError(f"h must be a non-empty square matrix, got shape {h.shape}")
        if self.lam < 0:
            raise ModelError(f"coupling must be non-negative, got {self.lam}")
        d = h.shape[0]
        if _rel_defect(h, h.conj().T) > _SYM_TOL:
            raise ModelError("h is not Hermitian")
        if self.kernel is not None:
            k = np.asarray(self.kernel)
            if k.shape != (d, d):
                raise ModelError(f"kernel shape {k.shape} does not match d={d}")
            if np.iscomplexobj(k) or _rel_defect(k, k.T) > _SYM_TOL:
                raise ModelError("pair kernel must be real symmetric")
        if self.V is not None:
            V = np.asarray(self.V)
            if V.shape != (d, d, d, d):
                raise ModelError(f"two-body tensor shape {V.shape} does not match d={d}")
            if _rel_defect(V, V.transpose(1, 0, 3, 2)) > _SYM_TOL:
                raise ModelError("two-body tensor violates particle-exchange symmetry")
            if _rel_defect(V, V.transpose(2, 3, 0, 1).conj()) > _SYM_TOL:
                raise ModelError("two-body tensor is not Hermitian")
        object.__setattr__(self, "h", _freeze(h))
        object.__setattr__(self, "V", _freeze(self.V))
        object.__setattr__(self, "kernel", _freeze(self.kernel))
        object.__setattr__(self, "laplacian", _freeze(self.laplacian))
        object.__setattr__(self, "meta", dict(self.meta))

    @property
    def d(self) -> int:
        return self.h.shape[0]

    @property
    def kernel_diagonal(self) -> bool:
        return self.kernel is not None

    @property
    def mu(self) -> float | None:
        return self.meta.get("mu")

    def two_body(self) -> np.ndarray:
        """Dense ``(d, d, d, d)`` two-body tensor."""
        if self.V is not None:
            return self.V
        d = self.d
        V = np.zeros((d, d, d, d))
        if self.kernel is not None:
            i, j = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
            V[i, j, i, j] = self.kernel
        return V

    def kinetic_matrix(self) -> np.ndarray:
        """The kinetic part ``a * (-Delta)`` of ``h``."""
        if self.laplacian is None:
            raise ModelError("model carries no Laplacian")
        return self.kinetic_prefactor * self.laplacian


# -- radial kernels ---------------------------------------------------------

def _soft_coulomb(r, softening, **_):
    return 1.0 / np.sqrt(r**2 + softening**2)


def _coulomb(r, softening, **_):
    with np.errstate(divide="ignore"):
        out = 1.0 / np.where(r > 0, r, np.inf)
    return np.where(r > 0, out, 1.0 / softening)


def _yukawa(r, softening, screening=1.0, **_):
    return np.exp(-screening * r) * _coulomb(r, softening)


def _gaussian(r, softening, width=1.0, **_):
    return np.exp(-0.5 * (r / width) ** 2)


_KERNELS: dict[str, tuple[Callable[..., np.ndarray], bool]] = {
    "soft_coulomb": (_soft_coulomb, True),
    "coulomb": (_coulomb, True),
    "yukawa": (_yukawa, True),
    "gaussian": (_gaussian, False),
}


def _parse_potential(potential) -> tuple[str, float, dict]:
    if potential is None:
        return "none", 1.0, {}
    if isinstance(potential, str):
        return potential, 1.0, {}
    entry = dict(potential)
    kind = entry.pop("kind")
    sign = float(entry.pop("sign", 1.0))
    return kind, sign, entry


def _external_values(external, x: np.ndarray) -> np.ndarray:
    d = len(x)
    if external is None:
        return np.zeros(d)
    if isinstance(external, Mapping):
        kind = external.get("kind")
        if kind == "harmonic":
            omega = float(external.get("omega", 1.0))
            centre = x.mean()
            return 0.5 * omega**2 * (x - centre) ** 2
        if kind == "sites":
            external = external["values"]
        else:
            raise ModelError(f"unknown external potential kind {kind!r}")
    w = np.asarray(external, dtype=float)
    if w.shape != (d,):
        raise ModelError(f"site potential must have length {d}, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ModelError("site potential must be finite")
    return w


def lattice_laplacian(d: int, spacing: float, boundary: str = "hard_wall") -> np.ndarray:
    """Second-order central-difference ``-Delta`` on ``d`` sites."""
    L = 2.0 * np.eye(d) - np.eye(d, k=1) - np.eye(d, k=-1)
    if boundary == "periodic":
        if d > 2:
            L[0, -1] -= 1.0
            L[-1, 0] -= 1.0
        elif d == 2:
            L[0, 1] = L[1, 0] = -2.0
    elif boundary != "hard_wall":
        raise ModelError(f"unknown boundary {boundary!r}")
    return L / spacing**2


def lattice_distances(d: int, spacing: float, boundary: str = "hard_wall") -> np.ndarray:
    idx = np.arange(d)
    sep = np.abs(idx[:, None] - idx[None, :]).astype(float)
    if boundary == "periodic":
        sep = np.minimum(sep, d - sep)
    return sep * spacing


def build_lattice_model(
    d: int,
    spacing: float = 1.0,
    potential=None,
    softening: float = 1.0,
    lam: float = 0.0,
    external=None,
    nu: float = 0.0,
    kinetic_prefactor: float = 0.5,
    boundary: str = "hard_wall",
) -> FiniteBasisModel:
    """1D lattice model with a kernel-diagonal pair interaction.

    ``potential`` is ``None``, a kernel name, or a mapping with ``kind``
    (``soft_coulomb``, ``coulomb``, ``yukawa``, ``gaussian``), an optional
    ``sign`` (-1 for attraction) and kernel parameters (``screening``,
    ``width``). ``external`` is ``None``, ``d`` site values, or a mapping
    ``{"kind": "harmonic", "omega": w}`` / ``{"kind": "sites", "values": [...]}``.
    """
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise ModelError(f"basis dimension must be a positive integer, got {d!r}")
    if not spacing > 0:
        raise ModelError(f"lattice spacing must be positive, got {spacing}")
    if kinetic_prefactor < 0:
        raise ModelError("kinetic prefactor must be non-negative")
    d = int(d)
    x = np.arange(d) * float(spacing)
    lap = lattice_laplacian(d, spacing, boundary)
    h = kinetic_prefactor * lap + np.diag(_external_values(external, x))

    kind, sign, params = _parse_potential(potential)
    if kind == "none":
        kernel = np.zeros((d, d))
    else:
        if kind not in _KERNELS:
            raise ModelError(f"unknown potential kind {kind!r}")
        fn, singular = _KERNELS[kind]
        if singular and not softening > 0:
            raise ModelError(
                f"kernel {kind!r} is singular at coincident points; softening must be > 0"
            )
        kernel = sign * fn(lattice_distances(d, spacing, boundary), softening, **params)
    mu = float(kernel.min())
    meta = {
        "name": "lattice",
        "spacing": float(spacing),
        "softening": float(softening),
        "potential": kind,
        "potential_sign": sign,
        "potential_params": params,
        "boundary": boundary,
        "mu": mu,
        "positions": x,
    }
    V = None
    if d <= DENSE_TWO_BODY_MAX_D:
        V = np.zeros((d, d, d, d))
        i, j = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
        V[i, j, i, j] = kernel
    return FiniteBasisModel(
        h=h,
        lam=float(lam),
        nu=float(nu),
        V=V,
        kernel=kernel,
        laplacian=lap,
        kinetic_prefactor=float(kinetic_prefactor),
        meta=meta,
    )


def check_model_invariants(model: FiniteBasisModel, tol: float = _SYM_TOL) -> dict[str, float]:
    """Relative defects of the Hermiticity/exchange invariants (all should be <= tol)."""
    V = model.two_body()
    out = {
        "h_hermitian": _rel_defect(model.h, model.h.conj().T),
        "V_exchange": _rel_defect(V, V.transpose(1, 0, 3, 2)),
        "V_hermitian": _rel_defect(V, V.transpose(2, 3, 0, 1).conj()),
    }
    if model.kernel is not None and model.mu is not None:
        out["mu_violation"] = max(0.0, model.mu - float(model.kernel.min()))
    return out


# -- scaling presets ----------------------------------------------------------

@dataclass(frozen=True)
class ScalingPreset:
    kind: str
    N: int
    lam: float
    kinetic_prefactor: float


def apply_scaling_preset(
    kind: str, N: int, lam: float | None = None, kinetic_prefactor: float | None = None
) -> ScalingPreset:
    """Coupling and kinetic prefactor for the mean-field scalings.

    ``large-volume``: lam = N^(-2/3), -Delta/2. ``semi-classical``:
    lam = N^(-2/3), -Delta/(2 N^(1/3)). ``inverse-N``: lam = 1/N, -Delta/2.
    ``custom`` takes both values from the arguments.
    """
    if N < 1:
        raise ModelError(f"particle number must be >= 1, got {N}")
    if kind == "large-volume":
        return ScalingPreset(kind, N, N ** (-2.0 / 3.0), 0.5)
    if kind == "semi-classical":
        return ScalingPreset(kind, N, N ** (-2.0 / 3.0), 0.5 / N ** (1.0 / 3.0))
    if kind == "inverse-N":
        return ScalingPreset(kind, N, 1.0 / N, 0.5)
    if kind == "custom":
        if lam is None or kinetic_prefactor is None:
            raise ModelError("custom preset needs lam and kinetic_prefactor")
        return ScalingPreset(kind, N, float(lam), float(kinetic_prefactor))
    raise ModelError(f"unknown scaling preset {kind!r}")
