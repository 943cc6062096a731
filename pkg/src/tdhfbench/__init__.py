"""Exact N-fermion dynamics vs. time-dependent Hartree-Fock, with error-bound audits."""

__version__ = "0.1.0"
