"""Spectral-triple numerics for the quantum group SU_q(2).

The package implements the standard representation and Dirac operator at any
level with no truncation error, extracts noncommutative residues and
regularised zeta values from level-trace asymptotics, realises the symbol
calculus on the cosphere bundle, and verifies the quantitative identities
tying the local index cocycle to the cyclic cocycle of the underlying
one-dimensional cycle, including the rational approximation of the
logarithmic derivative of the Dedekind eta function and the Fredholm index
pairing with the basic unitary.
"""

from .algebra import AlgebraElement, LaurentPoly, alpha_power, monomial
from .cochains import (CochainEngine, Cochain, connes_B, corollary1_check,
                       cyclic_pairing_raw, hochschild_b, index_pairing,
                       theorem3_check, theorem5_check, theorem6_check)
from .cosphere import (SymbolElement, decompose, lift_apply, pairing, rho,
                       smoothing_check, tau0, tau1, theorem4_check)
from .parsing import ParseError, parse
from .qseries import G, QSeriesValue, R, c0, c1, lambda_coeffs, qbinom
from .rep import (Evaluator, check_equivariance, check_relations,
                  hopf_action, vacuum_hopf_check)
from .zeta import (FitResult, StabilizationError, ZetaEngine,
                   dimension_spectrum_probe, fit_asymptotics, hprime_residue)

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement", "LaurentPoly", "alpha_power", "monomial",
    "CochainEngine", "Cochain", "connes_B", "hochschild_b",
    "corollary1_check", "cyclic_pairing_raw", "index_pairing",
    "theorem3_check", "theorem5_check", "theorem6_check",
    "SymbolElement", "decompose", "lift_apply", "pairing", "rho",
    "smoothing_check", "tau0", "tau1", "theorem4_check",
    "ParseError", "parse",
    "G", "QSeriesValue", "R", "c0", "c1", "lambda_coeffs", "qbinom",
    "Evaluator", "check_equivariance", "check_relations", "hopf_action",
    "vacuum_hopf_check",
    "FitResult", "StabilizationError", "ZetaEngine",
    "dimension_spectrum_probe", "fit_asymptotics", "hprime_residue",
    "__version__",
]
