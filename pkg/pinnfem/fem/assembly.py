"""Galerkin assembly of A_ij = B[ψ_j, ψ_i], F_i = F(ψ_i) and Dirichlet elimination."""

from dataclasses import dataclass, replace
from typing import Dict, Optional, Tuple

import numpy as np
import scipy.sparse as sp

from pinnfem.errors import CapabilityError, InputError
from pinnfem.fem.kernels import Coefficients
from pinnfem.fem.space import CLASSICAL, CellTabulation, FunctionSpace
from pinnfem.logger import logger
from pinnfem.network.jets import evaluate_field
from pinnfem.pinn.problems import ProblemSpec


@dataclass
class AssembledSystem:
    """Sparse system A U = F with its Dirichlet constraints."""

    matrix: sp.csr_matrix
    rhs: np.ndarray
    constrained_dofs: np.ndarray
    constrained_values: np.ndarray
    constrained: bool = False
    """True once :func:`apply_dirichlet` has been applied."""

    @property
    def n_dofs(self) -> int:
        return self.rhs.shape[0]

    @property
    def dirichlet(self) -> Dict[int, float]:
        return {
            int(dof): float(value)
            for dof, value in zip(self.constrained_dofs, self.constrained_values)
        }


def default_quadrature_degree(space: FunctionSpace) -> int:
    """2k + 2 for classical spaces, 2k + 4 for enriched ones."""
    degree = space.element.degree
    return 2 * degree + (2 if space.enrichment == CLASSICAL else 4)


def check_compatible(space: FunctionSpace, problem: ProblemSpec) -> None:
    if space.mesh.dim != problem.dim:
        raise InputError(
            f"problem '{problem.id}' is {problem.dim}D but the mesh is {space.mesh.dim}D"
        )
    if problem.is_biharmonic and not space.element.is_hermite:
        raise CapabilityError("the biharmonic operator needs Hermite elements")
    if not problem.is_biharmonic and space.element.is_hermite:
        raise CapabilityError("Hermite elements are only used for the biharmonic operator")


def coefficients_at(problem: ProblemSpec, tab: CellTabulation) -> Coefficients:
    return Coefficients(
        a=evaluate_field(problem.coeff_a, tab.points),
        c=evaluate_field(problem.coeff_c, tab.points),
        f=evaluate_field(problem.source_f, tab.points),
    )


def element_arrays(
    space: FunctionSpace, problem: ProblemSpec, tab: CellTabulation
) -> Tuple[np.ndarray, np.ndarray]:
    """Element matrices ``(C, nb, nb)`` and load vectors ``(C, nb)``."""
    coefficients = coefficients_at(problem, tab)
    weights = tab.weights
    if problem.is_biharmonic:
        second = tab.hessians[..., 0, 0]
        matrices = np.einsum("cq,cqi,cqj->cij", weights, second, second)
    else:
        matrices = np.einsum(
            "cq,cqid,cqjd->cij", weights * coefficients.a, tab.gradients, tab.gradients
        ) + np.einsum("cq,cqi,cqj->cij", weights * coefficients.c, tab.values, tab.values)
    matrices = 0.5 * (matrices + matrices.transpose(0, 2, 1))
    loads = np.einsum("cq,cqi->ci", weights * coefficients.f, tab.values)
    loads = loads - space.kernel.load_correction(problem, tab, coefficients)
    return matrices, loads


def assemble(
    space: FunctionSpace, problem: ProblemSpec, quadrature_degree: Optional[int] = None
) -> AssembledSystem:
    """
    Assemble the Galerkin system of ``problem`` in ``space``.

    Enriched spaces assemble through their kernel: the additive space moves
    B[ū_θ, ψ_i] to the right-hand side, the multiplicative space assembles
    the shifted problem in the product basis.

    :param quadrature_degree: Exactness of the cell rule; see
        :func:`default_quadrature_degree`.
    """
    check_compatible(space, problem)
    target = space.kernel.target_problem(problem)
    degree = quadrature_degree or default_quadrature_degree(space)
    order = 2 if problem.is_biharmonic else 1
    n_dofs = space.n_dofs
    rows, cols, data = [], [], []
    rhs = np.zeros(n_dofs)
    for tab in space.quadrature_tabulations(degree, order):
        matrices, loads = element_arrays(space, target, tab)
        local = space.dof_map[tab.cells]
        rows.append(np.broadcast_to(local[:, :, None], matrices.shape).ravel())
        cols.append(np.broadcast_to(local[:, None, :], matrices.shape).ravel())
        data.append(matrices.ravel())
        rhs += np.bincount(local.ravel(), weights=loads.ravel(), minlength=n_dofs)
    matrix = sp.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n_dofs, n_dofs),
    ).tocsr()
    dofs, values = space.kernel.boundary_values(target)
    logger.debug(
        "Assembled %r: degree %d quadrature, %d non-zeros, %d constrained DoFs",
        space,
        degree,
        matrix.nnz,
        len(dofs),
    )
    return AssembledSystem(matrix, rhs, np.asarray(dofs), np.asarray(values, dtype=np.float64))


def apply_dirichlet(system: AssembledSystem) -> AssembledSystem:
    """
    Symmetric elimination of the constrained DoFs.

    The lift of the prescribed values is moved to the right-hand side and the
    constrained rows and columns become identity rows and columns.
    """
    n_dofs = system.n_dofs
    lift = np.zeros(n_dofs)
    lift[system.constrained_dofs] = system.constrained_values
    rhs = system.rhs - system.matrix @ lift
    rhs[system.constrained_dofs] = system.constrained_values
    free = np.ones(n_dofs)
    free[system.constrained_dofs] = 0.0
    keep = sp.diags(free)
    matrix = (keep @ system.matrix @ keep + sp.diags(1.0 - free)).tocsr()
    matrix.eliminate_zeros()
    return replace(system, matrix=matrix, rhs=rhs, constrained=True)


def dump_matrix(system: AssembledSystem, path: str) -> None:
    """Write the matrix as ``i j value`` lines, row-major."""
    coo = system.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w", encoding="utf-8", newline="\n") as out_file:
        for index in order:
            out_file.write(f"{coo.row[index]} {coo.col[index]} {float(coo.data[index])!r}\n")
