"""One-point theta functions of the rank-one lattice VOA V_{2Z alpha} and
numerical checks of their SL2(Z) transformation laws."""

from .errors import DomainError, InputError, TruncationError
from .modular import (LATTICE, ModularData, SL2Word, a_gamma, decompose, verify_corollary,
                      verify_prop_zero_modes, verify_section4, verify_theorem1,
                      verify_theorem1_expanded)
from .series import EvalPoint, QZSeries, dz_operator, series_arith, series_eval
from .theta1pt import ALPHA, ONE, InsertionVector, PairJK, bracket_exp, phi, phi_ell, psi

__all__ = [
    "ALPHA", "ONE", "DomainError", "EvalPoint", "InputError", "InsertionVector", "LATTICE",
    "ModularData", "PairJK", "QZSeries", "SL2Word", "TruncationError", "a_gamma", "bracket_exp",
    "decompose", "dz_operator", "phi", "phi_ell", "psi", "series_arith", "series_eval",
    "verify_corollary", "verify_prop_zero_modes", "verify_section4", "verify_theorem1",
    "verify_theorem1_expanded",
]
