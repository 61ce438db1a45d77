"""Toric degree, torsion, resonances and torsion classification of eigenvalue phases."""
from .classify import (
    Classification,
    Kind,
    Simplification,
    Verdict,
    classify,
    compatible,
    is_simple_tuple,
    jordan_compatible,
    normalization_verdict,
    purity_witness,
    simple_tuple_matches,
    simplify_search,
)
from .resonance import (
    ResonanceDescriptor,
    additive_descriptor,
    brute_force_resonances,
    enumerate_resonances,
    resonance_descriptor,
    theta_descriptor,
    theta_resonant,
)
from .tuples import (
    ToricTuple,
    TorsionReport,
    eliminate_rational_coefficient,
    is_torsion_free,
    make_compatible,
    normalize_gcd,
    reduce_tuple,
    saturated_basis,
    toric_analysis,
    torsion,
    tuple_torsion,
    validate_tuple,
)
