"""PINN loss functionals evaluated on a collocation set."""

from typing import Optional, Union

import numpy as np
import torch

from pinnfem.errors import CapabilityError, InputError
from pinnfem.network.dense import DenseNetwork
from pinnfem.network.jets import Field, evaluate_field, jet_tensors
from pinnfem.pinn.boundary import surrogate_for
from pinnfem.pinn.collocation import CollocationSet
from pinnfem.pinn.problems import ProblemSpec, apply_operator

Evaluable = Union[DenseNetwork, Field]

L2_RESOLUTION = {1: 256, 2: 64, 3: 16}
"""Default number of cells per axis for the composite Gauss rule of the PINN L2 error."""


def residual_loss(net: Evaluable, problem: ProblemSpec, colloc: CollocationSet) -> torch.Tensor:
    """J_r: weighted sum of squared strong-form residuals at the interior points."""
    field = surrogate_for(net, problem)
    points = colloc.interior_tensor()
    residual = apply_operator(problem, field, points, create_graph=True) - problem.source_f(
        points
    )
    return colloc.interior_weight * (residual**2).sum()


def boundary_loss(net: Evaluable, problem: ProblemSpec, colloc: CollocationSet) -> torch.Tensor:
    """J_b: weighted sum of squared Dirichlet mismatches at the boundary points."""
    if colloc.boundary_points.shape[0] == 0:
        raise InputError("the collocation set has no boundary points")
    field = surrogate_for(net, problem)
    points = colloc.boundary_tensor()
    mismatch = field(points) - problem.boundary_g(points)
    return colloc.boundary_weight * (mismatch**2).sum()


def ritz_loss(net: Evaluable, problem: ProblemSpec, colloc: CollocationSet) -> torch.Tensor:
    """
    J_R: weighted sum of ½·a·|∇ū|² + c·ū² − ū·f at the interior points.

    The reaction term carries no ½.
    """
    if problem.is_biharmonic:
        raise CapabilityError("the Ritz energy is only defined for second-order problems")
    field = surrogate_for(net, problem)
    points = colloc.interior_tensor()
    jet = jet_tensors(field, points, 1, create_graph=True)
    density = (
        0.5 * problem.coeff_a(points) * (jet.gradient**2).sum(dim=1)
        + problem.coeff_c(points) * jet.value**2
        - jet.value * problem.source_f(points)
    )
    return colloc.interior_weight * density.sum()


def shifted_ritz(net: Evaluable, problem: ProblemSpec, colloc: CollocationSet) -> torch.Tensor:
    """J_R⁻ = J_R(ū_θ) − J_R(u) on the same collocation set."""
    exact = problem.require_exact()
    return ritz_loss(net, problem, colloc) - ritz_loss(exact, problem, colloc).detach()


def composite_gauss(dim: int, cells: int, points_per_cell: int = 4):
    """Tensor composite Gauss-Legendre rule on the unit box: points and weights."""
    nodes, weights = np.polynomial.legendre.leggauss(points_per_cell)
    nodes = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights
    starts = np.arange(cells) / cells
    axis_points = (starts[:, None] + nodes[None, :] / cells).ravel()
    axis_weights = np.tile(weights / cells, cells)
    grids = np.meshgrid(*([axis_points] * dim), indexing="ij")
    weight_grids = np.meshgrid(*([axis_weights] * dim), indexing="ij")
    points = np.column_stack([grid.ravel() for grid in grids])
    total = np.prod(np.stack([grid.ravel() for grid in weight_grids]), axis=0)
    return points, total


def pinn_l2_error(
    net: Evaluable, problem: ProblemSpec, resolution: Optional[int] = None
) -> float:
    """
    ‖ū_θ − u‖ in L2 of the unit box.

    :param resolution: Cells per axis of the composite 4-point Gauss rule.
    """
    exact = problem.require_exact()
    field = surrogate_for(net, problem)
    resolution = resolution or L2_RESOLUTION[problem.dim]
    points, weights = composite_gauss(problem.dim, resolution)
    difference = evaluate_field(field, points) - evaluate_field(exact, points)
    return float(np.sqrt(np.dot(weights, difference**2)))
