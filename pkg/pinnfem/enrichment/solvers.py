"""Galerkin solves in the additive and multiplicative enriched spaces."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from pinnfem.enrichment.shift import (
    DEFAULT_MARGIN,
    DEFAULT_RESOLUTION,
    EnrichmentPlan,
    check_margin,
    compute_shift,
)
from pinnfem.errors import InputError
from pinnfem.fem.solver import AUTO, solve_galerkin
from pinnfem.fem.space import (
    ADDITIVE,
    CLASSICAL,
    MULTIPLICATIVE,
    FESolution,
    FEValue,
    FunctionSpace,
)
from pinnfem.logger import logger
from pinnfem.pinn.boundary import surrogate_for
from pinnfem.pinn.problems import ProblemSpec


@dataclass
class EnrichedSolution(FESolution):
    """Solution u_h rebuilt from the auxiliary unknown w_h and the plan."""

    plan: Optional[EnrichmentPlan] = None

    @property
    def aux_dofs(self) -> np.ndarray:
        """DoFs of w_h."""
        return self.dofs


def _base_space(space: FunctionSpace) -> FunctionSpace:
    if space.enrichment != CLASSICAL:
        raise InputError(f"expected a classical base space, got '{space.enrichment}'")
    return space


def solve_additive(
    problem: ProblemSpec,
    space: FunctionSpace,
    net,
    quadrature_degree: Optional[int] = None,
    method: str = AUTO,
) -> EnrichedSolution:
    """
    Solve for u_h = w_h + ū_θ.

    w_h ∈ V_h solves B[w_h, v] = F(v) − B[ū_θ, v] with boundary data g − ū_θ.

    :param net: A network (wrapped by its boundary operator when tagged so)
        or any field used as ū_θ.
    """
    field = surrogate_for(net, problem)
    enriched = _base_space(space).enriched(ADDITIVE, field)
    plan = EnrichmentPlan(ADDITIVE, field)
    solution = solve_galerkin(problem, enriched, quadrature_degree, method)
    return EnrichedSolution(enriched, solution.dofs, solution.solve_info, 0.0, plan)


def solve_multiplicative(
    problem: ProblemSpec,
    space: FunctionSpace,
    net,
    shift: Optional[float] = None,
    margin: float = DEFAULT_MARGIN,
    resolution: int = DEFAULT_RESOLUTION,
    quadrature_degree: Optional[int] = None,
    method: str = AUTO,
) -> EnrichedSolution:
    """
    Solve for u_h = w_h·(ū_θ + C) − C.

    The problem shifted by C (source f + C·c, boundary data g + C) is solved
    with trial and test functions ψ_i·(ū_θ + C).

    :param shift: C; computed from the margin when not given.
    :raises ShiftError: when ū_θ + C comes closer to zero than the margin.
    """
    field = surrogate_for(net, problem)
    if shift is None:
        shift = compute_shift(field, problem, margin, resolution)
    plan = EnrichmentPlan(MULTIPLICATIVE, field, float(shift), margin, resolution)
    check_margin(plan, problem.dim)
    logger.info("Multiplicative enrichment of %s with shift C=%.6e", problem.id, plan.shift)
    enriched = _base_space(space).enriched(MULTIPLICATIVE, field, plan.shift)
    solution = solve_galerkin(problem, enriched, quadrature_degree, method)
    return EnrichedSolution(
        enriched, solution.dofs, solution.solve_info, solution.offset, plan
    )


def evaluate_enriched(solution: EnrichedSolution, points, order: int = 0) -> FEValue:
    """u_h (and its gradient when ``order`` is 1) at ``points``."""
    if order > 1:
        raise InputError("enriched solutions are evaluated up to first derivatives")
    return solution.evaluate(points, order)
