"""Sparse linear solves of constrained Galerkin systems."""

import inspect
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, cg, onenormest, splu

from pinnfem.errors import InputError, SolverError
from pinnfem.fem.assembly import AssembledSystem, apply_dirichlet, assemble
from pinnfem.fem.space import CLASSICAL, FESolution, FunctionSpace
from pinnfem.logger import logger
from pinnfem.pinn.problems import ProblemSpec

AUTO = "auto"
DIRECT = "direct"
CG = "cg"
METHODS = (AUTO, DIRECT, CG)

DIRECT_LIMIT = 200_000
"""Largest system solved by sparse LU under ``auto``."""
TARGET_RESIDUAL = 1e-12
FAILURE_RESIDUAL = 1e-8
REFINEMENT_STEPS = 2

_CG_TOLERANCE_KEY = "rtol" if "rtol" in inspect.signature(cg).parameters else "tol"


@dataclass(frozen=True)
class SolveResult:
    dofs: np.ndarray
    residual: float
    """‖AU − F‖ / ‖F‖."""
    method: str
    iterations: int = 0
    condition_estimate: Optional[float] = None


def relative_residual(matrix, solution: np.ndarray, rhs: np.ndarray) -> float:
    scale = np.linalg.norm(rhs)
    residual = np.linalg.norm(matrix @ solution - rhs)
    return float(residual / scale) if scale > 0 else float(residual)


def _solve_direct(matrix: sp.csc_matrix, rhs: np.ndarray, estimate_condition: bool):
    try:
        factor = splu(matrix)
    except RuntimeError as err:
        raise SolverError(f"sparse LU factorization failed: {err}", float("inf")) from err
    solution = factor.solve(rhs)
    for _ in range(REFINEMENT_STEPS):
        if relative_residual(matrix, solution, rhs) <= TARGET_RESIDUAL:
            break
        solution = solution + factor.solve(rhs - matrix @ solution)

    condition = None
    if estimate_condition:
        size = matrix.shape[0]
        inverse = LinearOperator(
            matrix.shape,
            matvec=factor.solve,
            rmatvec=lambda vector: factor.solve(vector, trans="T"),
            dtype=np.float64,
        )
        condition = float(onenormest(matrix)) * float(onenormest(inverse)) if size > 1 else 1.0
    return solution, condition


def _solve_cg(matrix: sp.csr_matrix, rhs: np.ndarray):
    diagonal = matrix.diagonal()
    if np.any(diagonal <= 0):
        raise SolverError("Jacobi preconditioning needs a positive diagonal", float("inf"))
    preconditioner = sp.diags(1.0 / diagonal)
    iterations = [0]

    def count(_):
        iterations[0] += 1

    options = {_CG_TOLERANCE_KEY: TARGET_RESIDUAL}
    solution, info = cg(
        matrix,
        rhs,
        M=preconditioner,
        maxiter=50 * matrix.shape[0],
        callback=count,
        atol=0.0,
        **options,
    )
    if info != 0:
        raise SolverError(
            f"conjugate gradients stopped after {iterations[0]} iterations (info={info})",
            relative_residual(matrix, solution, rhs),
        )
    return solution, iterations[0]


def solve(
    system: AssembledSystem, method: str = AUTO, estimate_condition: bool = True
) -> SolveResult:
    """
    Solve a constrained system.

    ``auto`` uses sparse LU (with iterative refinement) up to
    ``DIRECT_LIMIT`` unknowns and Jacobi-preconditioned CG beyond.

    :raises SolverError: when the factorization fails, CG does not converge,
        or the relative residual stays above ``FAILURE_RESIDUAL``.
    """
    if method not in METHODS:
        raise InputError(f"unknown solver '{method}'")
    if not system.constrained:
        raise InputError("apply the Dirichlet constraints before solving")
    if method == AUTO:
        method = DIRECT if system.n_dofs <= DIRECT_LIMIT else CG

    matrix = system.matrix
    condition = None
    iterations = 0
    if method == DIRECT:
        solution, condition = _solve_direct(matrix.tocsc(), system.rhs, estimate_condition)
    else:
        solution, iterations = _solve_cg(matrix.tocsr(), system.rhs)

    residual = relative_residual(matrix, solution, system.rhs)
    if not np.all(np.isfinite(solution)) or not residual <= FAILURE_RESIDUAL:
        raise SolverError(f"{method} solve did not converge", residual)
    if residual > TARGET_RESIDUAL:
        logger.warning("Relative residual %.3e above target %.0e", residual, TARGET_RESIDUAL)
    logger.debug(
        "Solved %d DoFs with %s: residual %.3e, condition estimate %s",
        system.n_dofs,
        method,
        residual,
        "-" if condition is None else "%.3e" % condition,
    )
    return SolveResult(solution, residual, method, iterations, condition)


def solve_galerkin(
    problem: ProblemSpec,
    space: FunctionSpace,
    quadrature_degree: Optional[int] = None,
    method: str = AUTO,
) -> FESolution:
    """Assemble, constrain and solve ``problem`` in ``space``."""
    system = apply_dirichlet(assemble(space, problem, quadrature_degree))
    result = solve(system, method)
    return FESolution(space, result.dofs, result, space.kernel.offset)


def solve_classical(
    problem: ProblemSpec,
    space: FunctionSpace,
    quadrature_degree: Optional[int] = None,
    method: str = AUTO,
) -> FESolution:
    """The classical finite element solution u_h ∈ V_h."""
    if space.enrichment != CLASSICAL:
        raise InputError(f"expected a classical space, got '{space.enrichment}'")
    return solve_galerkin(problem, space, quadrature_degree, method)
