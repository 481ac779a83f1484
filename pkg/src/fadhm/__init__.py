"""Exact computations for filtered ADHM data on quivers.

Polynomials over Q, Groebner bases, moment maps of filtered double-quiver
representations, unipotent invariants, spectral idempotents for the framed
Jordan quiver, and complete-intersection checks.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .adhm import act, moment_map, symplectic_form
from .ci import CIVerdict, OrderingStrategy, ci_exact, ci_leading_shortcut, ci_probabilistic
from .groebner import ResourceLimitError, groebner_basis, krull_dimension, normal_form
from .orders import MonomialOrder
from .poly import Polynomial, PolyRing, RationalFunction, parse_poly
from .problem import ProblemSpec, Report, SpecError, parse_spec
from .quiver import FiltrationSpec, Quiver, double, generic_rep

__all__ = [
    "CIVerdict",
    "FiltrationSpec",
    "MonomialOrder",
    "OrderingStrategy",
    "PolyRing",
    "Polynomial",
    "ProblemSpec",
    "Quiver",
    "RationalFunction",
    "Report",
    "ResourceLimitError",
    "SpecError",
    "act",
    "ci_exact",
    "ci_leading_shortcut",
    "ci_probabilistic",
    "double",
    "generic_rep",
    "groebner_basis",
    "krull_dimension",
    "moment_map",
    "normal_form",
    "parse_poly",
    "parse_spec",
    "symplectic_form",
]
