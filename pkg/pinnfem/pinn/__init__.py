from pinnfem.pinn.boundary import apply_boundary_operator, surrogate_for
from pinnfem.pinn.checkpoint import load_checkpoint, save_checkpoint
from pinnfem.pinn.collocation import CollocationSet, make_collocation
from pinnfem.pinn.losses import (
    boundary_loss,
    pinn_l2_error,
    residual_loss,
    ritz_loss,
    shifted_ritz,
)
from pinnfem.pinn.problems import (
    REGISTRY,
    ProblemSpec,
    check_manufactured,
    get_problem,
    shifted_problem,
)
from pinnfem.pinn.training import TrainingConfig, TrainingResult, train
