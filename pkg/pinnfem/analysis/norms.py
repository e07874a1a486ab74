"""Errors of finite element solutions against exact solutions."""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from pinnfem.errors import CapabilityError
from pinnfem.fem.space import FESolution
from pinnfem.network.jets import evaluate_jet
from pinnfem.pinn.problems import ProblemSpec


@dataclass(frozen=True)
class ErrorTriple:
    l2: float
    h1: float
    """Full H1 norm."""
    h1_semi: float
    h2: Optional[float] = None
    """H2 seminorm, for Hermite solutions."""


def default_error_degree(solution: FESolution) -> int:
    return 2 * solution.space.element.degree + 6


def error_norms(
    solution: FESolution,
    problem: ProblemSpec,
    quadrature_degree: Optional[int] = None,
    include_h2: Optional[bool] = None,
) -> ErrorTriple:
    """
    ‖u − u_h‖ in L2, H1 and (optionally) the H2 seminorm, by cell-wise Gauss quadrature.

    :param include_h2: Defaults to True for Hermite spaces.
    """
    exact = problem.require_exact()
    space = solution.space
    if include_h2 is None:
        include_h2 = space.element.is_hermite
    if include_h2 and space.mesh.dim != 1:
        raise CapabilityError("H2 errors are only computed in 1D")
    order = 2 if include_h2 else 1
    degree = quadrature_degree or default_error_degree(solution)

    l2_sq = semi_sq = h2_sq = 0.0
    for tab in space.quadrature_tabulations(degree, order):
        coefficients = solution.dofs[space.dof_map[tab.cells]]
        member = space.kernel.member(tab, coefficients)
        flat = tab.points.reshape(-1, space.mesh.dim)
        reference = evaluate_jet(exact, flat, order)
        shape = tab.weights.shape
        value_error = reference.value.reshape(shape) - (member.value - solution.offset)
        gradient_error = reference.gradient.reshape(member.gradient.shape) - member.gradient
        l2_sq += float(np.sum(tab.weights * value_error**2))
        semi_sq += float(np.sum(tab.weights[..., None] * gradient_error**2))
        if include_h2:
            second_error = reference.hessian.reshape(member.hessian.shape) - member.hessian
            h2_sq += float(np.sum(tab.weights[..., None, None] * second_error**2))
    return ErrorTriple(
        l2=math.sqrt(l2_sq),
        h1=math.sqrt(l2_sq + semi_sq),
        h1_semi=math.sqrt(semi_sq),
        h2=math.sqrt(h2_sq) if include_h2 else None,
    )
