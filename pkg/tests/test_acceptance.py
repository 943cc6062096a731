"""The eleven acceptance criteria, one test each.

Every test records a PASS/FAIL line; the lines are printed in the terminal
summary (and immediately with ``pytest -s``).
"""

import filecmp
import math
import subprocess
import sys
import time
from pathlib import Path

import mpmath as mp
import pytest

from conftest import ACCEPTANCE_LINES
from tdhfbench.diagnostics import BoundInputs, bound_evaluators
from tdhfbench.runner import load_config, run_scenario

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def report(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def _timed(name: str):
    cfg = load_config(CONFIGS / f"{name}.toml")
    start = time.perf_counter()
    res = run_scenario(cfg)
    return res, time.perf_counter() - start


@pytest.fixture(scope="module")
def noninteracting():
    return _timed("noninteracting")


@pytest.fixture(scope="module")
def gronwall():
    return _timed("gronwall")


@pytest.fixture(scope="module")
def audit():
    return _timed("audit")


def test_01_noninteracting_equivalence(noninteracting):
    res, secs = noninteracting
    err = res.checks["non-interacting equivalence max ||gamma - p||_1"].value
    report(1, "non-interacting equivalence", err <= 1e-8 and secs <= 30,
           f"max ||gamma - p||_1 = {err:.2e} (<= 1e-8), {secs:.1f} s (<= 30 s)")


def test_02_gronwall_identity(gronwall):
    res, secs = gronwall
    resid = res.checks["Groenwall identity |dS/dt - lam (T1+T2+T3)|"].value
    n = res.summary["samples"]
    report(2, "Groenwall identity", resid <= 1e-6 and n >= 20 and secs <= 120,
           f"max residual {resid:.2e} (<= 1e-6) at {n} times, {secs:.1f} s (<= 120 s)")


def test_03_evaporation_properties(audit):
    res, _ = audit
    names = ["DoE-1 lower", "DoE-1 upper", "DoE-2", "DoE-3", "S_g <= sup|g/x| ||gamma - p||_1"]
    slack = min(res.summary["min_slack"][k] for k in names)
    report(3, "S_g property suite", slack >= -1e-10 and res.summary["instances"] >= 100,
           f"min slack {slack:.2e} over {res.summary['instances']} random pairs (>= -1e-10)")


def test_04_form_bound(audit):
    res, _ = audit
    slack = res.summary["min_slack"]["dGamma(A) <= ||A||_1"]
    report(4, "fermionic form bound", slack >= -1e-10 and res.summary["instances"] >= 50,
           f"min ||A||_1 - lambda_max(dGamma(A)) = {slack:.2e} over {res.summary['instances']} operators")


def test_05_weighted_states(audit):
    res, _ = audit
    keys = [k for k in res.summary["min_slack"] if k.startswith("Tr ")]
    slack = min(res.summary["min_slack"][k] for k in keys)
    js = sorted({int(k.split("[")[1].rstrip("]")) for k in keys})
    report(5, "weighted-state bounds", slack >= -1e-10 and len(keys) == 12 and js == [-2, -1, 1, 2],
           f"min slack {slack:.2e} over 3 inequalities x j in {js}")


def test_06_commutation(audit):
    res, _ = audit
    m1 = res.checks["commutation defect M=1"].value
    m2 = res.checks["commutation defect M=2"].value
    report(6, "commutation relation", max(m1, m2) <= 1e-12,
           f"max defect M=1 {m1:.2e}, M=2 {m2:.2e} (<= 1e-12)")


def test_07_fdll():
    res, secs = _timed("fdll")
    coul = res.checks["coulomb reconstruction rel. error"].value
    weight = res.checks["coulomb |g_v| vs 16/(pi r^5) rel. error"].value
    yuk = max(c.value for k, c in res.checks.items() if k.endswith("round trip rel. error"))
    ok = coul <= 1e-6 and weight <= 1e-10 and yuk <= 1e-5 and secs <= 5
    report(7, "Fefferman-de la Llave identity", ok,
           f"Coulomb {coul:.1e}, |g_v| {weight:.1e}, Yukawa {yuk:.1e}, {secs:.2f} s")


def test_08_analytic_inequalities(audit):
    res, _ = audit
    lt = res.checks["Gaussian Lieb-Thirring ratio left/right"].value
    hardy = res.checks["Gaussian Hardy ratio |left/right - 1/3|"].value
    closed = res.checks["analytic closed form vs quadrature rel. error"].value
    report(8, "analytic inequality suite", lt <= 0.61 and hardy <= 1e-10 and closed <= 1e-10,
           f"LT ratio {lt:.5f} (<= 0.61), |Hardy ratio - 1/3| {hardy:.1e}, closed vs quad {closed:.1e}")


def test_09_tdhf_conservation(noninteracting, gronwall):
    worst = {}
    for res, _ in (noninteracting, gronwall):
        for key, tol in (("idempotency ||p^2 - p||_HS", 1e-8), ("trace |Tr p - N|", 1e-10),
                         ("HF energy drift per unit time (dt)", 1e-8),
                         ("HF energy drift per unit time (dt/2)", 1e-8)):
            worst[key] = max(worst.get(key, 0.0), res.checks[key].value / tol)
    report(9, "TDHF conservation", max(worst.values()) <= 1.0,
           "max value/tolerance " + ", ".join(f"{k.split()[0]}{' dt/2' if 'dt/2' in k else ''} {v:.1e}"
                                               for k, v in worst.items()))


def test_10_bound_arithmetic():
    b = bound_evaluators(BoundInputs(N=8, lam=0.01, K=100.0, t=1.0, delta0=0.0))
    mp.mp.dps = 60
    C = 30 * mp.mpf("0.01") * mp.sqrt(100) * mp.mpf(8) ** (mp.mpf(1) / 6)
    ref = mp.sqrt(8) * mp.sqrt(mp.mpf(8) ** (-mp.mpf(1) / 3) * (mp.exp(C) - 1))
    rel = abs(b.main_rhs / float(ref) - 1.0)
    c_err = abs(b.C - 3 * math.sqrt(2)) / (3 * math.sqrt(2))
    t0 = bound_evaluators(BoundInputs(8, 0.01, 100.0, 0.0, 0.0, 0.5))
    lam0 = [bound_evaluators(BoundInputs(8, 0.0, 100.0, t, 0.02)).main_rhs for t in (0.0, 1.0, 10.0)]
    limits = t0.main_rhs == 0.0 and t0.S_rhs == 0.5 and lam0[0] == lam0[1] == lam0[2] == math.sqrt(8 * 4 * 0.02)
    report(10, "bound-evaluator arithmetic", c_err <= 1e-15 and rel <= 1e-12 and limits,
           f"C = {b.C:.15f} (3 sqrt 2), main rhs {b.main_rhs:.12f} rel err {rel:.1e}, limits exact: {limits}")


def test_11_determinism(tmp_path):
    diffs = []
    for name, scenario in (("gronwall", "simulate"), ("audit", "audit")):
        dirs = []
        for k in range(2):
            out = tmp_path / f"{name}{k}"
            proc = subprocess.run([sys.executable, "-m", "tdhfbench", scenario, "--config",
                                   str(CONFIGS / f"{name}.toml"), "--out", str(out), "--seed", "11"],
                                  capture_output=True)
            assert proc.returncode == 0, proc.stderr.decode()
            dirs.append(out)
        files = sorted(p.relative_to(dirs[0]) for p in dirs[0].rglob("*") if p.is_file())
        _, mismatch, errors = filecmp.cmpfiles(dirs[0], dirs[1], [str(f) for f in files], shallow=False)
        diffs += mismatch + errors
        extra = {p.relative_to(dirs[1]) for p in dirs[1].rglob("*") if p.is_file()} - set(files)
        diffs += [str(e) for e in extra]
    report(11, "determinism", not diffs, "byte-identical outputs for simulate and audit" if not diffs
           else f"differing files: {diffs}")
