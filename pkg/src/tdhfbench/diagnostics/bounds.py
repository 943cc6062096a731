"""Closed-form right-hand sides of the trace-norm and S_g bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from tdhfbench.diagnostics.distances import DiagnosticsError

OVERFLOW_EXPONENT = 700.0
C_LT = 9.0 / 5.0 * (2.0 * math.pi) ** (2.0 / 3.0)

# coefficients of the three term bounds
COEF_A = 5.0 ** (-5.0 / 6.0) * 72.0 * math.pi ** (1.0 / 3.0)
COEF_B = 2.0 ** (1.0 / 3.0) * math.pi ** (2.0 / 3.0)
COEF_C = 4.0 * math.sqrt(2.0)


@dataclass(frozen=True)
class BoundInputs:
    N: int
    lam: float
    K: float
    t: float
    delta0: float = 0.0
    S0: float = 0.0

    def __post_init__(self):
        for name in ("lam", "K", "t", "delta0", "S0"):
            val = getattr(self, name)
            if not (val >= 0 and math.isfinite(val)):
                raise DiagnosticsError(f"bound input {name} must be finite and nonnegative, got {val}")
        if self.N < 1:
            raise DiagnosticsError(f"N must be positive, got {self.N}")
        if self.delta0 > 2.0:
            raise DiagnosticsError(f"delta0 = {self.delta0} exceeds the maximum 2")


@dataclass(frozen=True)
class BoundValues:
    C: float
    main_rhs: float
    S_rhs: float
    overflow: bool


def growth_rate(lam: float, K: float, N: int) -> float:
    """C = 30 lam sqrt(K) N^(1/6)."""
    return 30.0 * lam * math.sqrt(K) * N ** (1.0 / 6.0)


def bound_evaluators(inp: BoundInputs) -> BoundValues:
    """Right-hand sides of the trace-norm bound and the S_{g_1/3} bound."""
    N = inp.N
    C = growth_rate(inp.lam, inp.K, N)
    x = C * inp.t
    if x > OVERFLOW_EXPONENT:
        return BoundValues(C, math.inf, math.inf, True)
    grow = math.exp(x)
    em1 = math.expm1(x)
    main = math.sqrt(8.0) * math.sqrt(N ** (2.0 / 3.0) * inp.delta0 * grow + N ** (-1.0 / 3.0) * em1)
    S_rhs = inp.S0 * grow + N ** (2.0 / 3.0) * em1
    return BoundValues(C, main, S_rhs, False)


@dataclass(frozen=True)
class ConstantChain:
    """Coefficients of sqrt(K) N^(1/6) S and sqrt(K) N^(1/6) N^(2/3) in the dS/dt bound."""

    from_A: float
    from_B: float
    from_C: float
    additive: float

    @property
    def total(self) -> float:
        return self.from_A + self.from_B + self.from_C


def constant_chain() -> ConstantChain:
    """The three term bounds combined with Lieb-Thirring and Hardy at theta = 1/3."""
    lt = math.sqrt(1.0 / C_LT)  # ||f||_{5/3}^{5/6} <= (K / C_LT)^{1/2}
    hardy = 2.0  # ||f * |x|^-2||_inf^{1/2} <= (4K)^{1/2}
    return ConstantChain(
        from_A=COEF_A * lt,
        from_B=6.0 * COEF_B * lt,
        from_C=COEF_C * hardy,
        additive=COEF_B * lt,
    )


@dataclass(frozen=True)
class TermBoundReport:
    S: float
    f_53: float
    f_v2_inf: float
    bound_A: float
    bound_B: float
    bound_C: float
    ratio_A: float
    ratio_B: float
    ratio_C: float
    indicative: bool
    notes: tuple[str, ...] = ()


def _ratio(x: float, bound: float) -> float:
    if bound > 0:
        return abs(x) / bound
    return 0.0 if x == 0 else math.inf


def term_bounds(
    terms,
    S: float,
    N: int,
    theta: float,
    f_53: float,
    f_v2_inf: float,
    indicative: bool = True,
) -> TermBoundReport:
    """Compare |T1|, |T2|, |T3| with the three right-hand sides.

    ``f_53`` is ||f_HF||_{5/3}, ``f_v2_inf`` is ||f_HF * v^2||_inf.
    """
    if f_53 is None or f_v2_inf is None:
        raise DiagnosticsError("term bounds need the occupied density norms")
    bA = COEF_A * N ** (1.0 / 6.0) * f_53 ** (5.0 / 6.0) * S
    bB = COEF_B * f_53 ** (5.0 / 6.0) * N ** (1.0 / 6.0) * (6.0 * S + N ** (1.0 - theta))
    bC = COEF_C * math.sqrt(f_v2_inf) * N ** (theta / 2.0) * S
    notes = ("the N^(1-theta) additive part enters only through the T2 bound",)
    return TermBoundReport(
        S, f_53, f_v2_inf, bA, bB, bC,
        _ratio(terms.T1, bA), _ratio(terms.T2, bB), _ratio(terms.T3, bC),
        indicative, notes,
    )


def lattice_density_norms(p: np.ndarray, kernel: np.ndarray, spacing: float) -> tuple[float, float]:
    """||f||_{5/3} and ||f * v^2||_inf for f_i = p_ii / spacing on a 1D grid."""
    occ = np.clip(np.diag(p).real, 0.0, None)
    f = occ / spacing
    f53 = float((np.sum(f ** (5.0 / 3.0)) * spacing) ** 0.6)
    conv = (kernel**2) @ occ
    return f53, float(np.max(conv))


def term_bounds_audit(psi, p, model, theta: float, f_hf=None, g=None):
    """T1..T3 against their bounds; ``f_hf`` = (||f||_{5/3}, ||f * v^2||_inf).

    Without ``f_hf`` the lattice embedding of diag(p) is used and the report is
    marked indicative.
    """
    from tdhfbench.diagnostics.gronwall import gronwall_decomposition
    from tdhfbench.fock import evaporation_degree, g_theta

    N = psi.basis.N
    g = g or g_theta(N, theta)
    if f_hf is None:
        if model.kernel is None:
            raise DiagnosticsError("no occupied density supplied and the model has no lattice kernel")
        spacing = float(model.meta.get("spacing", 1.0))
        f_hf = lattice_density_norms(p, model.kernel, spacing)
        indicative = True
    else:
        indicative = False
    terms = gronwall_decomposition(psi, p, model, g)
    S = evaporation_degree(psi, p, g)
    return terms, term_bounds(terms, S, N, theta, f_hf[0], f_hf[1], indicative)


# -- kinetic energy bounds --------------------------------------------------

def attractive_constant(kinetic_prefactor: float = 1.0) -> float:
    """C in K <= (2/a) E + C lam^2 N^(7/3) from Lieb-Thirring and the R-optimised
    sup-norm estimate; equals (4/5)^(2/3) / a^2."""
    return (4.0 / 5.0) ** (2.0 / 3.0) / kinetic_prefactor**2


@dataclass(frozen=True)
class EnergyBoundReport:
    scenario: str
    K_bound: float
    ground_state_bound: float | None = None
    nonpositive_energy_bound: float | None = None
    formula: str = ""
    params: Mapping = field(default_factory=dict)


def _general_K(energy: float, e_gs: float) -> float:
    if e_gs > 0:
        raise DiagnosticsError(f"ground-state energy must be nonpositive, got {e_gs}")
    if energy < e_gs:
        raise DiagnosticsError(f"energy {energy} lies below the ground-state energy {e_gs}")
    return (math.sqrt(energy - e_gs) + math.sqrt(-e_gs)) ** 2


def _need(params: Mapping, *names):
    missing = [n for n in names if n not in params]
    if missing:
        raise DiagnosticsError(f"missing scenario parameters: {', '.join(missing)}")
    for n in names:
        v = params[n]
        if isinstance(v, (int, float)) and not math.isfinite(v):
            raise DiagnosticsError(f"parameter {n} must be finite")


def energy_bounds(scenario: str, params: Mapping) -> EnergyBoundReport:
    """Kinetic-energy bounds for the atom, molecule and free-space scenarios.

    atom: N, alpha, [energy], [ground_state_energy]
    molecule: N, Z (list of charges), alpha, [energy], [ground_state_energy]
    repulsive-free: energy, [kinetic_prefactor=1]
    attractive-free: energy, N, lam, [kinetic_prefactor=1], [constant]
    general: energy, ground_state_energy
    """
    params = dict(params)
    if scenario in ("atom", "molecule"):
        _need(params, "N", "alpha")
        N, alpha = params["N"], params["alpha"]
        if N <= 0 or alpha < 0:
            raise DiagnosticsError("atom/molecule need N > 0 and alpha >= 0")
        if scenario == "atom":
            Z = params.get("Z", N)
            if Z != N:
                raise DiagnosticsError(f"the atom bound is for neutral atoms (Z = N), got Z={Z}, N={N}")
            gs = 2.31 * alpha**2 * N ** (7.0 / 3.0)
            formula = "-E_gs <= 2.31 alpha^2 N^(7/3)"
        else:
            _need(params, "Z")
            charges = list(params["Z"])
            if not charges or min(charges) <= 0:
                raise DiagnosticsError("molecule charges must be positive")
            M, Z = len(charges), max(charges)
            gs = 0.231 * alpha**2 * N * (1.0 + 2.16 * Z * (M / N) ** (1.0 / 3.0)) ** 2
            formula = "-E_gs <= 0.231 alpha^2 N [1 + 2.16 Z (M/N)^(1/3)]^2"
        e_gs = params.get("ground_state_energy", -gs)
        if -e_gs > gs * (1 + 1e-12):
            raise DiagnosticsError(f"ground_state_energy {e_gs} violates the bound -E_gs <= {gs}")
        K = math.nan
        nonpos = None
        if "energy" in params:
            E = params["energy"]
            K = _general_K(E, e_gs)
            if E <= 0:
                nonpos = -4.0 * e_gs
            formula += "; K <= (sqrt(E - E_gs) + sqrt(-E_gs))^2"
        return EnergyBoundReport(scenario, K, gs, nonpos, formula, params)
    if scenario == "general":
        _need(params, "energy", "ground_state_energy")
        E, e_gs = params["energy"], params["ground_state_energy"]
        nonpos = -4.0 * e_gs if E <= 0 else None
        return EnergyBoundReport(scenario, _general_K(E, e_gs), None, nonpos,
                                 "K <= (sqrt(E - E_gs) + sqrt(-E_gs))^2", params)
    if scenario == "repulsive-free":
        _need(params, "energy")
        a = params.get("kinetic_prefactor", 1.0)
        E = params["energy"]
        if E < 0 or a <= 0:
            raise DiagnosticsError("repulsive free systems have nonnegative energy and a > 0")
        return EnergyBoundReport(scenario, E / a, None, None, "K <= E / a", params)
    if scenario == "attractive-free":
        _need(params, "energy", "N", "lam")
        a = params.get("kinetic_prefactor", 1.0)
        if a <= 0 or params["N"] <= 0 or params["lam"] < 0:
            raise DiagnosticsError("attractive-free needs a > 0, N > 0, lam >= 0")
        C = params.get("constant", attractive_constant(a))
        K = 2.0 * params["energy"] / a + C * params["lam"] ** 2 * params["N"] ** (7.0 / 3.0)
        if K < 0:
            raise DiagnosticsError("inconsistent parameters: negative kinetic bound")
        return EnergyBoundReport(
            scenario, K, None, None,
            "K <= (2/a) E + C lam^2 N^(7/3), C = (4/5)^(2/3) / a^2", params,
        )
    raise DiagnosticsError(f"unknown energy-bound scenario {scenario!r}")
