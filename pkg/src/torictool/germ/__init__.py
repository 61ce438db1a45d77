"""Jets of holomorphic germs: Poincaré-Dulac normalization, torus commutation and flows."""
from .fields import (
    FlowCheck,
    JetVectorField,
    commutes_with_field,
    flow,
    flow_derivative_deviation,
    flow_group_deviation,
    flow_normal_form_check,
    lie_bracket,
    vf_toric_degree,
)
from .jets import EXACT, Field, JetMap, compose, eigenvalues, exponents_of_degree
from .normalize import (
    CommutationReport,
    NormalForm,
    commutation_check,
    conjugacy_residual,
    pd_normalize,
    phase_linked_jet,
)
