"""Certified computations on beta-expansions of unity, Parry Upper functions and small Salem numbers."""

from .algebraic import AlgebraicNumber, ZBetaElement, compare, sign_exact
from .catalog import constants_report, ingest, reproduce_table1, reproduce_table2
from .errors import (
    DomainError,
    Inconclusive,
    InsufficientDigits,
    NotClassified,
    NotUnique,
    ParseError,
    PrecisionExceeded,
    RenyiParryError,
    StructureError,
)
from .expansion import classify_parry, dynamical_degree, greedy_expansion_of_one, parry_polynomial
from .polynomial import LEHMER, IntPolynomial, factor_ABC, trinomial
from .rouche import certify_rouche, find_a_max, find_lenticular_zero, lenticulus_scan, winding_number
from .trail import build_section, build_trail, greedy_gamma_expansion
from .trinomial import all_roots, asymptotic_report, sector_count, theta_n
from .zeta import ParryUpperSeries, f_eval, zeta_closed_form

__version__ = "0.1.0"
