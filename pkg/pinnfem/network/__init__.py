from pinnfem.network.adam import AdamState, adam_step
from pinnfem.network.dense import (
    BOUNDARY_DIRICHLET_PRODUCT,
    BOUNDARY_NONE,
    DenseNetwork,
    forward,
    init_network,
    parameter_count,
)
from pinnfem.network.gradients import parameter_gradient, value_and_gradient
from pinnfem.network.jets import (
    Field,
    JetValue,
    evaluate_field,
    evaluate_jet,
    jet_tensors,
)
