"""Entanglement of formation of two-mode Gaussian states."""
from gauss_eof.eof import EofResult, eof, eof_bounds, eof_exact, entropy_of_entanglement
from gauss_eof.gs_core import CovarianceMatrix, PurityParams, StandardForm, expand, from_purity_params

__all__ = [
    "CovarianceMatrix",
    "EofResult",
    "PurityParams",
    "StandardForm",
    "entropy_of_entanglement",
    "eof",
    "eof_bounds",
    "eof_exact",
    "expand",
    "from_purity_params",
]
