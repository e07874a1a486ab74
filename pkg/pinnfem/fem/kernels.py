"""Per-cell basis kernels: how a space turns classical tabulations into its own."""

from typing import NamedTuple, Tuple

import numpy as np

from pinnfem.fem.space import CellTabulation, FEValue, FunctionSpace
from pinnfem.network.jets import JetValue, evaluate_jet
from pinnfem.pinn.problems import ProblemSpec


class Coefficients(NamedTuple):
    """Problem data at the points of a tabulation, each of shape ``(C, Q)``."""

    a: np.ndarray
    c: np.ndarray
    f: np.ndarray


def boundary_data(problem: ProblemSpec, points: np.ndarray, order: int) -> JetValue:
    return evaluate_jet(problem.boundary_g, points, order)


def select_trace(values: np.ndarray, slopes, slope_dofs: np.ndarray) -> np.ndarray:
    if slopes is None:
        return values
    return np.where(slope_dofs, slopes, values)


class ClassicalKernel:
    """The plain Lagrange or Hermite basis."""

    space: FunctionSpace
    offset: float = 0.0
    """Constant subtracted from members of the space on reconstruction."""

    def __init__(self, space: FunctionSpace):
        self.space = space

    def target_problem(self, problem: ProblemSpec) -> ProblemSpec:
        """The problem whose Galerkin system this space assembles."""
        return problem

    def transform(self, tab: CellTabulation) -> CellTabulation:
        return tab

    def load_correction(
        self, problem: ProblemSpec, tab: CellTabulation, coefficients: Coefficients
    ) -> np.ndarray:
        """Subtracted from the element load vectors."""
        return np.zeros(tab.values.shape[::2])

    def member(self, tab: CellTabulation, coefficients: np.ndarray) -> FEValue:
        """
        Values (and derivatives) of Σ u_j ψ_j at the tabulated points.

        :param coefficients: Local DoF values, shape ``(C, nb)``.
        """
        value = np.einsum("cqn,cn->cq", tab.values, coefficients)
        gradient = hessian = None
        if tab.gradients is not None:
            gradient = np.einsum("cqnd,cn->cqd", tab.gradients, coefficients)
        if tab.hessians is not None:
            hessian = np.einsum("cqnde,cn->cqde", tab.hessians, coefficients)
        return FEValue(value, gradient, hessian)

    def trace_values(
        self, data: JetValue, points: np.ndarray, slope_dofs: np.ndarray
    ) -> np.ndarray:
        """DoF values imposed on the boundary, given the jets of the boundary data."""
        slopes = None if data.gradient is None else data.gradient[:, 0]
        return select_trace(data.value, slopes, slope_dofs)

    def boundary_values(self, problem: ProblemSpec) -> Tuple[np.ndarray, np.ndarray]:
        """Constrained DoFs and their values, by nodal (and slope) interpolation."""
        dofs = self.space.boundary_dofs
        points = self.space.dof_coordinates[dofs]
        slope_dofs = self.space.slope_dofs[dofs]
        order = 1 if slope_dofs.any() else 0
        data = boundary_data(problem, points, order)
        return dofs, self.trace_values(data, points, slope_dofs)
