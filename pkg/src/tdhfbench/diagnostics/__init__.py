"""Distances, the Groenwall decomposition, bound evaluators and inequality audits."""

from tdhfbench.diagnostics.analytic import (
    InequalityReport,
    RadialDensity,
    analytic_inequalities,
    gaussian_density,
    hydrogenic_density,
    tabulated_density,
    zero_density,
)
from tdhfbench.diagnostics.audits import (
    AuditReport,
    commutation_audit,
    evaporation_properties_audit,
    exchange_dominance_slack,
    form_bound_audit,
    random_audit_instance,
    random_commutation_instance,
    run_random_audits,
    weighted_state_audit,
)
from tdhfbench.diagnostics.bounds import (
    BoundInputs,
    BoundValues,
    attractive_constant,
    bound_evaluators,
    constant_chain,
    energy_bounds,
    growth_rate,
    term_bounds_audit,
)
from tdhfbench.diagnostics.distances import DiagnosticsError, trace_distance
from tdhfbench.diagnostics.gronwall import (
    GronwallTerms,
    commutator_form,
    fd_evaporation_rate,
    gronwall_decomposition,
)
from tdhfbench.diagnostics.momentum import MomentumDrift, momentum_drift
from tdhfbench.diagnostics.record import COLUMNS, DiagnosticsRecord
from tdhfbench.fock.evaporation import g_theta as weight_g_theta

__all__ = [
    "AuditReport",
    "BoundInputs",
    "BoundValues",
    "COLUMNS",
    "DiagnosticsError",
    "DiagnosticsRecord",
    "GronwallTerms",
    "InequalityReport",
    "MomentumDrift",
    "RadialDensity",
    "analytic_inequalities",
    "attractive_constant",
    "bound_evaluators",
    "commutation_audit",
    "commutator_form",
    "constant_chain",
    "energy_bounds",
    "evaporation_properties_audit",
    "exchange_dominance_slack",
    "fd_evaporation_rate",
    "form_bound_audit",
    "gaussian_density",
    "gronwall_decomposition",
    "growth_rate",
    "hydrogenic_density",
    "momentum_drift",
    "random_audit_instance",
    "random_commutation_instance",
    "run_random_audits",
    "tabulated_density",
    "term_bounds_audit",
    "trace_distance",
    "weight_g_theta",
    "weighted_state_audit",
    "zero_density",
]
