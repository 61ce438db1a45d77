"""Toric degree, torsion and resonance analysis of eigenvalue phases, with exact lattice tools
and Poincaré-Dulac jets."""
from .errors import ParseError, PrecisionError, PreconditionError, ToricToolError
from .exact import (
    GaussianRational,
    LinearForm,
    PhaseScalar,
    PhaseVector,
    SymbolBasis,
    is_integral_combination,
    phase_from_terms,
)

__version__ = "0.1.0"
