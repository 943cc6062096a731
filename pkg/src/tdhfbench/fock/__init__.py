"""Exact N-fermion engine on a finite single-particle basis."""

from tdhfbench.fock.basis import FockBasis, FockError, enumerate_basis
from tdhfbench.fock.densities import (
    projector_from_orbitals,
    reduced_density,
    slater_state,
    two_body_tensor,
)
from tdhfbench.fock.evaporation import (
    WeightedComponents,
    WeightFunction,
    check_projector,
    counting_components,
    evaporation_degree,
    g_theta,
    identity_weight,
)
from tdhfbench.fock.operators import (
    ManyBodyState,
    build_many_body_hamiltonian,
    dgamma2_apply,
    dgamma2_matrix,
    dgamma_apply,
    dgamma_matrix,
)
from tdhfbench.fock.propagate import PropagationError, SpectralPropagator, krylov_expmv, propagate_exact

__all__ = [
    "FockBasis",
    "FockError",
    "ManyBodyState",
    "PropagationError",
    "SpectralPropagator",
    "WeightFunction",
    "WeightedComponents",
    "build_many_body_hamiltonian",
    "check_projector",
    "counting_components",
    "dgamma2_apply",
    "dgamma2_matrix",
    "dgamma_apply",
    "dgamma_matrix",
    "enumerate_basis",
    "evaporation_degree",
    "g_theta",
    "identity_weight",
    "krylov_expmv",
    "projector_from_orbitals",
    "propagate_exact",
    "reduced_density",
    "slater_state",
    "two_body_tensor",
]
