"""Integer lattices, normal forms and the monoids of nonnegative lattice points."""
from .minimals import (
    Cominimals,
    PaperMinimals,
    cominimal_elements,
    cominimal_exact_bound,
    decompose,
    default_cominimal_bound,
    delta_bound,
    is_decomposition,
    paper_minimal_elements,
    red,
    reduce_pair,
)
from .monoid import (
    AffineMonoidDescription,
    Lattice,
    affine_description,
    affine_span_members,
    extreme_rays,
    grlex_key,
    hilbert_basis,
    hilbert_basis_of_lattice,
    minimal_inhomogeneous,
    monoid_combinations,
)
from .normal_forms import (
    determinant,
    hermite_form,
    integer_kernel,
    rational_coordinates,
    rational_rank,
    row_hermite_basis,
    smith_form,
    solve_integer_linear,
    xgcd,
)
