"""Random-instance audits of the inequalities behind the Groenwall argument.

Every audit returns signed slacks (right side minus left side); a slack below
``-tol`` is a violation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from tdhfbench.diagnostics.distances import trace_distance
from tdhfbench.fock import (
    FockBasis,
    ManyBodyState,
    WeightFunction,
    counting_components,
    dgamma2_apply,
    dgamma_apply,
    dgamma2_matrix,
    dgamma_matrix,
    enumerate_basis,
    g_theta,
    identity_weight,
    reduced_density,
    slater_state,
)
from tdhfbench.fock.evaporation import adapted_orbitals, wedge_power
from tdhfbench.model import FiniteBasisModel
from tdhfbench.tdhf import hf_energy_terms

SLACK_TOL = 1e-10


@dataclass
class AuditReport:
    slacks: dict[str, float] = field(default_factory=dict)
    skipped: dict[str, str] = field(default_factory=dict)

    def add(self, name: str, value: float) -> None:
        value = float(value)
        self.slacks[name] = min(value, self.slacks.get(name, np.inf))

    def merge(self, other: "AuditReport") -> "AuditReport":
        for k, v in other.slacks.items():
            self.add(k, v)
        for k, v in other.skipped.items():
            self.skipped.setdefault(k, v)
        return self

    @property
    def min_slack(self) -> float:
        return min(self.slacks.values(), default=np.inf)

    def failures(self, tol: float = SLACK_TOL) -> list[str]:
        return sorted(k for k, v in self.slacks.items() if not v >= -tol)


# -- random instances -------------------------------------------------------

def random_state(basis: FockBasis, rng: np.random.Generator) -> ManyBodyState:
    z = rng.standard_normal(basis.dim) + 1j * rng.standard_normal(basis.dim)
    return ManyBodyState(basis, z / np.linalg.norm(z))


def random_orbitals(d: int, N: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((d, N)) + 1j * rng.standard_normal((d, N))
    q, _ = np.linalg.qr(z)
    return q


def random_projector(d: int, N: int, rng: np.random.Generator) -> np.ndarray:
    phi = random_orbitals(d, N, rng)
    p = phi @ phi.conj().T
    return 0.5 * (p + p.conj().T)


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (z + z.conj().T)


def random_monotone_weight(N: int, rng: np.random.Generator, g0: float | None = None) -> WeightFunction:
    start = rng.uniform(0, 1) if g0 is None else g0
    return WeightFunction(start + np.concatenate([[0.0], np.cumsum(rng.uniform(0, 2, N))]))


def near_slater_state(basis: FockBasis, p: np.ndarray, rng: np.random.Generator, eps: float) -> ManyBodyState:
    """A random state concentrated near the Slater determinant of ``p``."""
    U = adapted_orbitals(p)
    base = slater_state(U[:, : basis.N], basis).amplitudes
    noise = random_state(basis, rng).amplitudes
    v = base + eps * noise
    return ManyBodyState(basis, v / np.linalg.norm(v))


def instance_sizes(rng: np.random.Generator, d_max: int = 6, N_max: int = 3) -> tuple[int, int]:
    d = int(rng.integers(2, d_max + 1))
    N = int(rng.integers(1, min(N_max, d) + 1))
    return d, N


# -- degree-of-evaporation properties --------------------------------------

def _S(comps, g) -> float:
    return float(np.asarray(g(np.arange(comps.N + 1)), dtype=float) @ comps.weights)


def evaporation_properties_audit(
    psi: ManyBodyState,
    p: np.ndarray,
    g: WeightFunction,
    rng: np.random.Generator | None = None,
    pairs: int = 3,
) -> AuditReport:
    """Slacks of the S_g property list for one (psi, p, g)."""
    rng = rng or np.random.default_rng(0)
    rep = AuditReport()
    N = psi.basis.N
    comps = counting_components(psi, p)
    vals = np.asarray(g.values)
    S = _S(comps, g)
    S_id = _S(comps, identity_weight(N))
    gamma = reduced_density(psi, 1)
    tr, hs = trace_distance(gamma, p)

    rep.add("DoE-1 lower", S - vals.min())
    rep.add("DoE-1 upper", vals.max() - S)
    rep.add("DoE-2", 2.0 * S_id - hs**2)

    x = np.arange(1, N + 1)
    dominates = N >= 1 and vals[0] == 0.0 and np.all(vals[1:] >= x - 1e-12)
    if dominates:
        rep.add("DoE-3", np.sqrt(8.0 * S / N) - tr / N)
    else:
        rep.skipped["DoE-3"] = "needs g(0) = 0 and g(x) >= x on [0, N]"
    if N >= 1 and vals[0] == 0.0:
        sup = np.max(np.abs(vals[1:] / x))
        rep.add("S_g <= sup|g/x| ||gamma - p||_1", sup * tr - S)
    else:
        rep.skipped["S_g <= sup|g/x| ||gamma - p||_1"] = "needs g(0) = 0"

    for _ in range(pairs):
        g1 = WeightFunction(rng.normal(size=N + 1))
        g2 = WeightFunction(rng.normal(size=N + 1))
        a, b = rng.normal(size=2)
        combo = WeightFunction(a * g1.values + b * g2.values)
        resid = _S(comps, combo) - a * _S(comps, g1) - b * _S(comps, g2)
        rep.add("linearity", -abs(resid))
        upper = WeightFunction(np.maximum(g1.values, g2.values))
        rep.add("order", _S(comps, upper) - _S(comps, g1))
    return rep


# -- fermionic bound dGamma(A) <= ||A||_1 ----------------------------------

def form_bound_audit(A: np.ndarray, basis: FockBasis) -> AuditReport:
    A = 0.5 * (A + A.conj().T)
    top = np.linalg.eigvalsh(dgamma_matrix(A, basis).toarray()).max()
    trace_norm = np.abs(np.linalg.eigvalsh(A)).sum()
    rep = AuditReport()
    rep.add("dGamma(A) <= ||A||_1", trace_norm - top)
    return rep


def random_trace_class(d: int, rng: np.random.Generator) -> np.ndarray:
    """Hermitian matrix with random spectrum of mixed sign."""
    U = random_orbitals(d, d, rng)
    ev = rng.normal(size=d) * rng.uniform(0.1, 3.0)
    return (U * ev) @ U.conj().T


# -- weighted-state bounds for g_theta --------------------------------------

def weighted_state_audit(psi: ManyBodyState, p: np.ndarray, theta: float) -> AuditReport:
    """The three g_theta inequalities for Psi[j], j in {-2, -1, 1, 2}.

    The left sides are evaluated by applying dGamma(q) and dGamma2(q x q) to
    the weighted vectors, not through the counting resolution.
    """
    basis = psi.basis
    N = basis.N
    g = g_theta(N, theta)
    comps = counting_components(psi, p)
    S = _S(comps, g)
    q = np.eye(basis.d) - p
    qq = np.kron(q, q)
    rep = AuditReport()
    for j in (-2, -1, 1, 2):
        w = comps.weighted(j, g)
        wstate = psi.with_amplitudes(w)
        a = abs(j)
        rep.add(f"Tr rho[{j}]", a * N ** (1 - theta) - np.vdot(w, w).real)
        rep.add(f"Tr dG(q) rho[{j}]", a * (a + 1) * S - np.vdot(w, dgamma_apply(q, wstate)).real)
        rep.add(
            f"Tr dG2(qxq) rho[{j}]",
            a * (a + 1) ** 2 * N**theta * S - np.vdot(w, dgamma2_apply(qq, wstate)).real,
        )
    return rep


# -- commutation with g-hat -------------------------------------------------

def weight_operator(p: np.ndarray, basis: FockBasis, g) -> np.ndarray:
    """Dense matrix of g(dGamma(q)) on the N-particle sector."""
    U = adapted_orbitals(p)
    M = wedge_power(U, basis)
    outside = (basis.occupations() >= basis.N).sum(axis=1) if basis.N else np.zeros(1, int)
    return (M * np.asarray(g(outside), dtype=float)) @ M.conj().T


def level_projectors(p: np.ndarray, M: int) -> list[np.ndarray]:
    """P_0^(M), ..., P_M^(M): sums of tensor products with exactly k factors of q."""
    q = np.eye(p.shape[0]) - p
    out = []
    for k in range(M + 1):
        total = 0
        for pattern in product((0, 1), repeat=M):
            if sum(pattern) != k:
                continue
            term = np.ones((1, 1))
            for bit in pattern:
                term = np.kron(term, q if bit else p)
            total = total + term
        out.append(total)
    return out


def commutation_audit(p: np.ndarray, basis: FockBasis, hM: np.ndarray, g: WeightFunction, M: int) -> float:
    """max_jk || dG(P_j h P_k) g^ - (tau_{j-k} g)^ dG(P_j h P_k) ||_max."""
    if M not in (1, 2):
        raise ValueError("M must be 1 or 2")
    d = basis.d
    P = level_projectors(p, M)
    ghat = weight_operator(p, basis, g)
    worst = 0.0
    for j in range(M + 1):
        for k in range(M + 1):
            X = P[j] @ hM @ P[k]
            op = dgamma_matrix(X, basis) if M == 1 else dgamma2_matrix(X.reshape(d * d, d * d), basis)
            op = op.toarray()
            shifted = weight_operator(p, basis, g.translated(j - k))
            worst = max(worst, float(np.abs(op @ ghat - shifted @ op).max(initial=0.0)))
    return worst


# -- exchange dominance -----------------------------------------------------

def exchange_dominance_slack(model: FiniteBasisModel, p: np.ndarray) -> float:
    """D - |X| for the direct and exchange energies of p."""
    _, D, X = hf_energy_terms(model, p)
    return D - abs(X)


def random_audit_instance(
    rng: np.random.Generator,
    theta: float = 1.0 / 3.0,
    d_max: int = 6,
    N_max: int = 3,
) -> AuditReport:
    """Evaporation properties, the form bound and the weighted-state bounds on one random instance."""
    d, N = instance_sizes(rng, d_max, N_max)
    basis = enumerate_basis(d, N)
    p = random_projector(d, N, rng)
    eps = 10 ** rng.uniform(-3, 0)
    psi = near_slater_state(basis, p, rng, eps) if rng.uniform() < 0.5 else random_state(basis, rng)
    choice = rng.integers(3)
    if choice == 0:
        g = g_theta(N, theta)
    elif choice == 1:
        g = identity_weight(N)
    else:
        g = random_monotone_weight(N, rng, g0=0.0)
    rep = evaporation_properties_audit(psi, p, g, rng)
    rep.merge(form_bound_audit(random_trace_class(d, rng), basis))
    rep.merge(weighted_state_audit(psi, p, theta))
    gamma = reduced_density(psi, 1)
    a, _ = trace_distance(gamma, p)
    b, _ = trace_distance(p, gamma)
    rep.add("trace distance symmetry", -abs(a - b))
    rep.add("trace distance >= 0", a)
    rep.add("trace distance <= 2N", 2 * N - a)
    return rep


def random_commutation_instance(rng: np.random.Generator, d_max: int = 5) -> tuple[float, float]:
    """Worst commutation defect for M = 1 and M = 2 on one random instance."""
    d = int(rng.integers(2, d_max + 1))
    N = int(rng.integers(1, d + 1))
    basis = enumerate_basis(d, N)
    p = random_projector(d, N, rng)
    g = random_monotone_weight(N, rng)
    return (
        commutation_audit(p, basis, random_hermitian(d, rng), g, 1),
        commutation_audit(p, basis, random_hermitian(d * d, rng), g, 2),
    )


def run_random_audits(
    rng: np.random.Generator,
    instances: int = 100,
    theta: float = 1.0 / 3.0,
    d_max: int = 6,
    N_max: int = 3,
) -> AuditReport:
    rep = AuditReport()
    for _ in range(instances):
        rep.merge(random_audit_instance(rng, theta, d_max, N_max))
    return rep
