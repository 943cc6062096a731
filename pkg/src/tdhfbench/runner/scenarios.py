"""Scenario drivers. Each returns a ScenarioResult; writing files is left to output.py."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb

import numpy as np

from tdhfbench.diagnostics import (
    COLUMNS,
    AuditReport,
    BoundInputs,
    DiagnosticsRecord,
    analytic_inequalities,
    bound_evaluators,
    constant_chain,
    gaussian_density,
    hydrogenic_density,
    exchange_dominance_slack,
    fd_evaporation_rate,
    gronwall_decomposition,
    momentum_drift,
    random_audit_instance,
    random_commutation_instance,
    trace_distance,
)
from tdhfbench.fdll import (
    COULOMB_WEIGHT,
    coulomb_potential,
    coulomb_weight,
    reconstruct_potential,
    weight_from_potential,
    yukawa_potential,
)
from tdhfbench.fock import (
    ManyBodyState,
    SpectralPropagator,
    WeightFunction,
    build_many_body_hamiltonian,
    enumerate_basis,
    evaporation_degree,
    g_theta,
    propagate_exact,
    reduced_density,
    slater_state,
)
from tdhfbench.fock.propagate import DENSE_LIMIT
from tdhfbench.model import FiniteBasisModel, apply_scaling_preset, build_lattice_model
from tdhfbench.runner.config import ConfigError, RunConfig
from tdhfbench.tdhf import TdhfState, advance, hf_observables


@dataclass
class Check:
    value: float
    tol: float
    passed: bool
    note: str = ""


@dataclass
class ScenarioResult:
    scenario: str
    tables: dict[str, tuple[tuple[str, ...], list[tuple]]] = field(default_factory=dict)
    series: dict[str, list[tuple[float, float]]] = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    checks: dict[str, Check] = field(default_factory=dict)
    lines: list[str] = field(default_factory=list)

    def check(self, name: str, value: float, tol: float, passed: bool | None = None, note: str = "") -> None:
        if passed is None:
            passed = bool(value <= tol)
        self.checks[name] = Check(float(value), float(tol), bool(passed), note)

    @property
    def failures(self) -> list[str]:
        return [k for k, c in self.checks.items() if not c.passed]

    @property
    def passed(self) -> bool:
        return not self.failures


# -- model and initial data --------------------------------------------------

def build_model(cfg: RunConfig) -> FiniteBasisModel:
    m = cfg.model
    lam, prefactor = m.lam, m.kinetic_prefactor
    if m.preset is not None:
        preset = apply_scaling_preset(m.preset, cfg.N, lam, prefactor)
        lam, prefactor = preset.lam, preset.kinetic_prefactor
    return build_lattice_model(
        d=m.d,
        spacing=m.spacing,
        potential=m.potential,
        softening=m.softening,
        lam=lam,
        external=m.external,
        nu=m.nu,
        kinetic_prefactor=0.5 if prefactor is None else prefactor,
        boundary=m.boundary,
    )


def initial_data(model: FiniteBasisModel, N: int, kind: str, angle: float) -> tuple[np.ndarray, np.ndarray]:
    """(orbitals for the exact state, orbitals of the TDHF projector)."""
    w, U = np.linalg.eigh(model.h)
    phi = U[:, :N].astype(complex)
    if kind == "slater":
        return phi, phi
    if N >= model.d:
        raise ConfigError("a perturbed start needs an unoccupied orbital (N < d)")
    rot = phi.copy()
    rot[:, N - 1] = np.cos(angle) * U[:, N - 1] + np.sin(angle) * U[:, N]
    return rot, phi


def make_propagator(H, basis, tol: float):
    """(propagator(amps, t), dense?) using full diagonalisation below the dense limit."""
    if basis.dim < DENSE_LIMIT:
        return SpectralPropagator(H), True

    def prop(amps, t):
        return propagate_exact(H, ManyBodyState(basis, amps), t, tol=tol, method="krylov").amplitudes

    return prop, False


def weight_for(cfg: RunConfig) -> WeightFunction:
    if cfg.weight.values is not None:
        return WeightFunction(np.asarray(cfg.weight.values))
    return g_theta(cfg.N, cfg.weight.theta)


# -- simulate ----------------------------------------------------------------

def _energy_drift(model, phi0, dt, steps, stride, exchange, t_max) -> float:
    state = TdhfState(phi0)
    E0 = hf_observables(model, state, exchange).energy
    worst = 0.0
    phi = phi0
    done = 0
    while done < steps:
        n = min(stride, steps - done)
        phi = advance(model, phi, dt, n, exchange)
        done += n
        worst = max(worst, abs(hf_observables(model, TdhfState(phi), exchange).energy - E0))
    return worst / t_max


def run_simulate(cfg: RunConfig) -> ScenarioResult:
    res = ScenarioResult("simulate")
    model = build_model(cfg)
    N, d = cfg.N, model.d
    dim = comb(d, N)
    if dim > cfg.fock_cap:
        raise ConfigError(f"Fock dimension C({d},{N}) = {dim} exceeds the cap {cfg.fock_cap}")
    tm, ch = cfg.time, cfg.checks
    exchange = cfg.model.exchange
    basis = enumerate_basis(d, N)
    H = build_many_body_hamiltonian(model, basis)
    prop, dense = make_propagator(H, basis, tm.tol)
    g = weight_for(cfg)
    g13 = g_theta(N, 1.0 / 3.0)

    psi_orb, phi = initial_data(model, N, cfg.initial.kind, cfg.initial.angle)
    phi_start = phi
    psi0 = slater_state(psi_orb, basis)
    p0 = phi @ phi.conj().T
    gamma0 = reduced_density(psi0, 1)
    delta0 = min(trace_distance(gamma0, p0)[0] / N, 2.0)
    S0 = evaporation_degree(psi0, p0, g13)

    steps = int(round(tm.t_max / tm.dt))
    sample_steps = list(range(0, steps + 1, tm.stride))
    if sample_steps[-1] != steps:
        sample_steps.append(steps)

    rows = []
    max_idem = max_trace = max_resid = 0.0
    max_norm = max_Eexact = 0.0
    min_dom = math.inf
    min_mom = math.inf
    E_exact0 = None
    amps = psi0.amplitudes
    last = 0
    for k in sample_steps:
        if k > last:
            phi = advance(model, phi, tm.dt, k - last, exchange)
            if not dense:
                amps = prop(amps, (k - last) * tm.dt)
        t = k * tm.dt
        if dense:
            amps = prop(psi0.amplitudes, t)
        last = k
        psi = ManyBodyState(basis, amps)
        p = phi @ phi.conj().T
        obs = hf_observables(model, TdhfState(phi, t), exchange)
        gamma = reduced_density(psi, 1)
        tr, hs = trace_distance(gamma, 0.5 * (p + p.conj().T))
        S = evaporation_degree(psi, p, g)
        terms = gronwall_decomposition(psi, p, model, g, exchange)
        fd = fd_evaporation_rate(prop, model, psi, phi, g, tm.fd_delta, exchange)
        E_exact = float(np.vdot(amps, H @ amps).real)
        E_exact0 = E_exact if E_exact0 is None else E_exact0
        mom = momentum_drift(model, p, exchange)

        max_idem = max(max_idem, float(np.linalg.norm(p @ p - p)))
        max_trace = max(max_trace, abs(float(np.trace(p).real) - N))
        max_resid = max(max_resid, abs(fd - model.lam * terms.total))
        max_norm = max(max_norm, abs(np.linalg.norm(amps) - 1.0))
        max_Eexact = max(max_Eexact, abs(E_exact - E_exact0))
        if model.mu is not None and model.mu >= 0:
            min_dom = min(min_dom, exchange_dominance_slack(model, p))
        min_mom = min(min_mom, mom.slack)
        rows.append([t, S, fd, terms.T1, terms.T2, terms.T3, tr, hs, obs.kinetic, obs.energy,
                     E_exact, math.nan, math.nan, mom.drift])

    K = max(r[8] for r in rows)
    for r in rows:
        b = bound_evaluators(BoundInputs(N, model.lam, K, r[0], delta0, S0))
        r[11], r[12] = b.main_rhs, b.S_rhs
    records = [DiagnosticsRecord(*r) for r in rows]
    bad_rows = sorted({p for rec in records for p in rec.validate(N)})

    res.tables["records"] = (COLUMNS, [rec.values() for rec in records])
    for i, col in enumerate(COLUMNS[1:], start=1):
        res.series[col] = [(r[0], r[i]) for r in rows]

    t_scale = max(1.0, tm.t_max)
    res.check("idempotency ||p^2 - p||_HS", max_idem, ch.idempotency * t_scale)
    res.check("trace |Tr p - N|", max_trace, ch.trace)
    drift = _energy_drift(model, phi_start, tm.dt, steps, tm.stride, exchange, tm.t_max)
    res.check("HF energy drift per unit time (dt)", drift, ch.energy_drift)
    drift_half = None
    if tm.self_test:
        drift_half = _energy_drift(model, phi_start, tm.dt / 2, 2 * steps, 2 * tm.stride, exchange, tm.t_max)
        res.check("HF energy drift per unit time (dt/2)", drift_half, ch.energy_drift)
    res.check("Groenwall identity |dS/dt - lam (T1+T2+T3)|", max_resid, ch.gronwall)
    res.check("exact norm", max_norm, max(1e-10, 100 * tm.tol))
    res.check("exact energy", max_Eexact, max(1e-10, 100 * tm.tol) * max(1.0, abs(E_exact0)))
    if model.lam == 0 and cfg.initial.kind == "slater":
        res.check("non-interacting equivalence max ||gamma - p||_1",
                  max(r[6] for r in rows), ch.noninteracting)
    if math.isfinite(min_dom):
        res.check("exchange energy <= direct energy", -min_dom, ch.slack)
    res.check("direct momentum drift <= bound", -min_mom, ch.slack)
    res.check("records finite and trace_dist in [0, 2N]", float(len(bad_rows)), 0.0,
              note=", ".join(bad_rows))

    res.summary = {
        "K": K,
        "delta0": delta0,
        "S0_g_1/3": S0,
        "lambda": model.lam,
        "kinetic_prefactor": model.kinetic_prefactor,
        "fock_dimension": dim,
        "propagator": "dense" if dense else "krylov",
        "max_identity_residual": max_resid,
        "energy_drift": {"dt": drift, "dt/2": drift_half},
        "samples": len(rows),
        "bound_columns": "indicative (finite-basis model; the bounds are stated for 3D Coulomb systems)",
    }
    res.lines.append(f"K = {K:.6g}, max Groenwall residual = {max_resid:.3e}, samples = {len(rows)}")
    return res


# -- audit ---------------------------------------------------------------------

def _audit_task(args):
    seed, theta, d_max, N_max = args
    return random_audit_instance(np.random.default_rng(seed), theta, d_max, N_max)


def _commutation_task(args):
    seed, d_max = args
    return random_commutation_instance(np.random.default_rng(seed), d_max)


def _pool_map(fn, items, workers: int):
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def run_audit(cfg: RunConfig, workers: int = 1) -> ScenarioResult:
    res = ScenarioResult("audit")
    a = cfg.audit
    seq = np.random.SeedSequence(cfg.seed)
    inst_seeds, comm_seeds = seq.spawn(2)
    tasks = [(s, a.theta, a.d_max, a.N_max) for s in inst_seeds.spawn(a.instances)]
    report = AuditReport()
    for r in _pool_map(_audit_task, tasks, workers):
        report.merge(r)
    comm = _pool_map(_commutation_task, [(s, a.commutation_d_max) for s in comm_seeds.spawn(a.commutation_instances)], workers)
    rows = []
    for name in sorted(report.slacks):
        slack = report.slacks[name]
        res.check(name, -slack, cfg.checks.slack)
        rows.append((name, slack))
        res.lines.append(f"min slack {name}: {slack:.3e}")
    for M, idx in ((1, 0), (2, 1)):
        if comm:
            worst = max(c[idx] for c in comm)
            name = f"commutation defect M={M}"
            res.check(name, worst, a.commutation_tol)
            rows.append((name, -worst))
            res.lines.append(f"max {name}: {worst:.3e}")
    res.tables["audit"] = (("inequality", "min_slack"), rows)
    res.tables["analytic"] = _analytic_suite(res, a)
    res.summary = {
        "instances": a.instances,
        "commutation_instances": a.commutation_instances,
        "min_slack": {k: v for k, v in rows},
        "skipped": dict(sorted(report.skipped.items())),
    }
    return res


def _analytic_suite(res: ScenarioResult, a) -> tuple:
    """Lieb-Thirring, Hardy and sup-norm estimates on Gaussian and hydrogenic densities."""
    header = ("density", "source", "lt_left", "lt_right", "hardy_left", "hardy_right", "sup_left", "sup_right")
    rows = []
    worst_lt = worst_hardy = worst_closed = 0.0
    min_slack = math.inf
    densities = [gaussian_density(x) for x in a.gaussian_a] + [hydrogenic_density()]
    for dens in densities:
        closed = analytic_inequalities(dens, use_closed_form=True)
        quad = analytic_inequalities(dens, use_closed_form=False)
        for src, rep in (("closed", closed), ("quad", quad)):
            rows.append((dens.name, src, rep.lt_left, rep.lt_right, rep.hardy_left, rep.hardy_right,
                         rep.sup_left, rep.sup_right))
            min_slack = min(min_slack, *rep.slacks.values())
        for field_ in ("lt_left", "hardy_left", "sup_left", "sup_right"):
            c, q = getattr(closed, field_), getattr(quad, field_)
            worst_closed = max(worst_closed, abs(c - q) / max(abs(c), 1e-300))
        if dens.name.startswith("gaussian"):
            worst_lt = max(worst_lt, closed.lt_left / closed.lt_right)
            worst_hardy = max(worst_hardy, abs(closed.hardy_left / closed.hardy_right - 1.0 / 3.0))
    res.check("Gaussian Lieb-Thirring ratio left/right", worst_lt, a.lt_ratio_max)
    res.check("Gaussian Hardy ratio |left/right - 1/3|", worst_hardy, a.closed_form_tol)
    res.check("analytic closed form vs quadrature rel. error", worst_closed, a.closed_form_tol)
    res.check("analytic inequalities slack", -min_slack, 0.0)
    res.lines.append(f"analytic: max Gaussian LT ratio {worst_lt:.5f}, min slack {min_slack:.4g}")
    return header, rows


# -- fdll-check --------------------------------------------------------------

def run_fdll(cfg: RunConfig) -> ScenarioResult:
    res = ScenarioResult("fdll-check")
    f = cfg.fdll
    grid = np.geomspace(f.r_min, f.r_max, f.r_count)
    weight_rows, recon_rows = [], []

    coul = weight_from_potential(coulomb_potential(), grid)
    exact = COULOMB_WEIGHT / grid**5
    rel_w = float(np.max(np.abs(np.abs(coul.g) - exact) / exact))
    for r, gv, mg in zip(grid, coul.g, coul.margin):
        weight_rows.append(("coulomb", r, gv, mg))
    worst = 0.0
    for x in f.points:
        val = reconstruct_potential(x, coulomb_weight()).value
        err = abs(val * x - 1.0)
        worst = max(worst, err)
        recon_rows.append(("coulomb", x, val, 1.0 / x, err))
    res.check("coulomb reconstruction rel. error", worst, f.coulomb_tol)
    res.check("coulomb |g_v| vs 16/(pi r^5) rel. error", rel_w, f.weight_tol)
    res.lines.append(f"coulomb: sign of literal weight {coul.sign:+d}, max reconstruction error {worst:.2e}")

    signs = {"coulomb": coul.sign}
    for k in f.yukawa_screening:
        v = yukawa_potential(k)
        rep = weight_from_potential(v, grid)
        name = v.name
        signs[name] = rep.sign
        for r, gv, mg in zip(grid, rep.g, rep.margin):
            weight_rows.append((name, r, gv, mg))
        worst = 0.0
        for x in f.yukawa_points:
            val = reconstruct_potential(x, rep.weight).value
            target = float(v.value(np.array(x)))
            err = abs(val / target - 1.0)
            worst = max(worst, err)
            recon_rows.append((name, x, val, target, err))
        res.check(f"{name} round trip rel. error", worst, f.yukawa_tol)
        res.check(f"{name} admissibility margin", -float(rep.margin.min()), 0.0,
                  note="16/(pi r^5) - |g_v| on the grid")
        res.lines.append(f"{name}: sign {rep.sign:+d}, round trip {worst:.2e}, min margin {rep.margin.min():.3e}")

    res.tables["fdll_weights"] = (("potential", "r", "g_v", "margin"), weight_rows)
    res.tables["fdll_reconstruction"] = (("potential", "x", "value", "exact", "rel_error"), recon_rows)
    res.summary = {"calibrated_sign": signs}
    return res


# -- bounds --------------------------------------------------------------------

def _bound_task(args):
    N, lam, K, t, delta0, S0 = args
    b = bound_evaluators(BoundInputs(N, lam, K, t, delta0, S0))
    return (lam, K, N, t, delta0, S0, b.C, b.main_rhs, b.S_rhs, int(b.overflow))


def _monotone(arr: np.ndarray, axis: int, values) -> bool:
    order = np.argsort(np.asarray(values), kind="stable")
    a = np.take(arr, order, axis=axis)
    diff = np.diff(a, axis=axis)
    with np.errstate(invalid="ignore"):
        ok = (diff >= -1e-12 * np.maximum(np.abs(np.take(a, range(1, a.shape[axis]), axis=axis)), 1.0)) | np.isnan(diff)
    return bool(np.all(ok))


def run_bounds(cfg: RunConfig, workers: int = 1) -> ScenarioResult:
    res = ScenarioResult("bounds")
    b = cfg.bounds
    axes = (b.lam, b.K, b.N, b.t, b.delta0, b.S0)
    tasks = [(N, lam, K, t, d0, s0) for lam, K, N, t, d0, s0 in itertools.product(*axes)]
    rows = _pool_map(_bound_task, tasks, workers)
    shape = tuple(len(a) for a in axes)
    main = np.array([r[7] for r in rows]).reshape(shape)
    Srhs = np.array([r[8] for r in rows]).reshape(shape)
    for name, axis in (("lambda", 0), ("K", 1), ("t", 3), ("delta0", 4)):
        ok = _monotone(main, axis, axes[axis])
        res.check(f"main bound nondecreasing in {name}", 0.0 if ok else 1.0, 0.0, ok)
    for name, axis in (("lambda", 0), ("K", 1), ("t", 3), ("S0", 5)):
        ok = _monotone(Srhs, axis, axes[axis])
        res.check(f"S bound nondecreasing in {name}", 0.0 if ok else 1.0, 0.0, ok)
    t0 = [r for r in rows if r[3] == 0.0]
    res.check("S bound equals S0 at t = 0", max((abs(r[8] - r[5]) for r in t0), default=0.0), 0.0)
    res.check("main bound is 0 at delta0 = 0, t = 0",
              max((abs(r[7]) for r in t0 if r[4] == 0.0), default=0.0), 0.0)
    lam0 = [r for r in rows if r[0] == 0.0]
    spread = 0.0
    for r in lam0:
        expected = math.sqrt(8.0) * math.sqrt(r[2] ** (2.0 / 3.0) * r[4])
        spread = max(spread, abs(r[7] - expected) / max(expected, 1.0))
    res.check("lambda = 0 main bound constant in t", spread, 1e-15)
    ref = bound_evaluators(BoundInputs(8, 0.01, 100.0, 1.0))
    res.check("reference case C = 3 sqrt(2)", abs(ref.C / (3.0 * math.sqrt(2.0)) - 1.0), 1e-15)
    chain = constant_chain()
    res.check("constant chain total <= 30", chain.total, 30.0)
    res.check("constant chain additive term <= 30", chain.additive, 30.0)
    res.tables["bounds"] = (
        ("lambda", "K", "N", "t", "delta0", "S0", "C", "bound_main_rhs", "bound_S_rhs", "overflow"), rows)
    res.summary = {
        "grid_size": len(rows),
        "reference_case": {"lambda": 0.01, "K": 100.0, "N": 8, "t": 1.0, "delta0": 0.0,
                           "C": ref.C, "bound_main_rhs": ref.main_rhs},
        "constant_chain": {"A": chain.from_A, "B": chain.from_B, "C": chain.from_C,
                           "total": chain.total, "additive": chain.additive},
    }
    res.lines.append(f"constant chain {chain.from_A:.4f} + {chain.from_B:.4f} + {chain.from_C:.4f} "
                     f"= {chain.total:.4f} <= 30")
    return res


def run_scenario(cfg: RunConfig, workers: int = 1) -> ScenarioResult:
    if cfg.scenario == "simulate":
        return run_simulate(cfg)
    if cfg.scenario == "audit":
        return run_audit(cfg, workers)
    if cfg.scenario == "fdll-check":
        return run_fdll(cfg)
    if cfg.scenario == "bounds":
        return run_bounds(cfg, workers)
    raise ConfigError(f"unknown scenario {cfg.scenario!r}")
