"""One row of monitored quantities per sampled time."""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass, fields


@dataclass(frozen=True)
class DiagnosticsRecord:
    t: float
    S_g: float
    dSdt_fd: float
    T1: float
    T2: float
    T3: float
    trace_dist: float
    hs_dist: float
    K_hf: float
    E_hf: float
    E_exact: float
    bound_main_rhs: float
    bound_S_rhs: float
    momentum_drift: float

    def values(self) -> tuple[float, ...]:
        return astuple(self)

    def validate(self, N: int) -> list[str]:
        problems = [f.name for f in fields(self) if not math.isfinite(getattr(self, f.name))
                    and f.name not in ("bound_main_rhs", "bound_S_rhs", "momentum_drift")]
        if not (-1e-12 <= self.trace_dist <= 2 * N + 1e-12):
            problems.append("trace_dist out of [0, 2N]")
        return problems


COLUMNS = tuple(f.name for f in fields(DiagnosticsRecord))
