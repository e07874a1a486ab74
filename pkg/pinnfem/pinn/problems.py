"""Boundary-value problems on the unit box and the built-in manufactured problems."""

import math
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
import torch

from pinnfem.errors import CapabilityError, InputError
from pinnfem.logger import logger
from pinnfem.network.jets import Field, evaluate_field, jet_tensors

SECOND_ORDER_ELLIPTIC = "second_order_elliptic"
BIHARMONIC_1D = "biharmonic_1d"
OPERATORS = (SECOND_ORDER_ELLIPTIC, BIHARMONIC_1D)


def constant(value: float) -> Field:
    """A constant field."""

    def _constant(x: torch.Tensor) -> torch.Tensor:
        return torch.full(x.shape[:-1], float(value), dtype=x.dtype)

    return _constant


@dataclass(frozen=True)
class ProblemSpec:
    """
    -∇·(a∇u) + c·u = f on [0,1]^dim with u = g on the boundary,
    or u'''' = f on [0,1] with clamped data for ``biharmonic_1d``.

    All coefficient fields take a ``(N, dim)`` tensor and return ``(N,)``.
    """

    id: str
    dim: int
    coeff_a: Field
    coeff_c: Field
    source_f: Field
    boundary_g: Field
    exact_u: Optional[Field] = None
    operator: str = SECOND_ORDER_ELLIPTIC
    description: str = ""
    shift: float = field(default=0.0)
    """Constant C already added by :func:`shifted_problem`."""

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise InputError(f"problem dimension must be 1, 2 or 3, got {self.dim}")
        if self.operator not in OPERATORS:
            raise InputError(f"unknown operator '{self.operator}'")
        if self.operator == BIHARMONIC_1D and self.dim != 1:
            raise InputError("the biharmonic operator is only available in 1D")

    @property
    def is_biharmonic(self) -> bool:
        return self.operator == BIHARMONIC_1D

    def require_exact(self) -> Field:
        """The exact solution, or a capability error when it is unknown."""
        if self.exact_u is None:
            raise CapabilityError(f"problem '{self.id}' has no exact solution")
        return self.exact_u


def apply_operator(
    problem: ProblemSpec, fn: Field, x: torch.Tensor, create_graph: bool = False
) -> torch.Tensor:
    """The differential operator of ``problem`` applied to ``fn`` at ``x``."""
    if problem.is_biharmonic:
        return jet_tensors(fn, x, 4, create_graph).derivatives[:, 4]
    jet = jet_tensors(fn, x, 2, create_graph)
    coeff = jet_tensors(problem.coeff_a, x, 1)
    laplacian = torch.diagonal(jet.hessian, dim1=1, dim2=2).sum(dim=1)
    divergence = coeff.value * laplacian + (coeff.gradient * jet.gradient).sum(dim=1)
    return -divergence + problem.coeff_c(x) * jet.value


def shifted_problem(problem: ProblemSpec, shift: float) -> ProblemSpec:
    """
    The problem solved by u + C: source f + C·c, boundary data g + C.

    For the biharmonic operator constants are in the kernel, so only the
    boundary data moves.
    """
    shift = float(shift)
    source, boundary, exact = problem.source_f, problem.boundary_g, problem.exact_u

    def shifted_source(x):
        if problem.is_biharmonic:
            return source(x)
        return source(x) + shift * problem.coeff_c(x)

    def shifted_boundary(x):
        return boundary(x) + shift

    shifted_exact = None
    if exact is not None:

        def shifted_exact(x):
            return exact(x) + shift

    return ProblemSpec(
        id=f"{problem.id}+shift",
        dim=problem.dim,
        coeff_a=problem.coeff_a,
        coeff_c=problem.coeff_c,
        source_f=shifted_source,
        boundary_g=shifted_boundary,
        exact_u=shifted_exact,
        operator=problem.operator,
        description=problem.description,
        shift=problem.shift + shift,
    )


def manufactured_defect(problem: ProblemSpec, count: int = 1000, seed: int = 0) -> float:
    """Largest relative mismatch between L(exact_u) and f at random points."""
    exact = problem.require_exact()
    points = torch.from_numpy(np.random.default_rng(seed).random((count, problem.dim)))
    lhs = apply_operator(problem, exact, points).detach().numpy()
    rhs = evaluate_field(problem.source_f, points.numpy())
    return float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs))))


def check_manufactured(problem: ProblemSpec, count: int = 1000, tolerance: float = 1e-8):
    """Raise when the source of ``problem`` does not match its exact solution."""
    defect = manufactured_defect(problem, count)
    logger.debug("Problem %s manufactured defect %.3e", problem.id, defect)
    if defect > tolerance:
        raise InputError(
            f"problem '{problem.id}': source does not match the exact solution "
            f"(relative defect {defect:.3e})"
        )


# 1D Poisson: u = (1 - x) sin(5x) + 2


def _p1d_poisson_u(x):
    t = x[:, 0]
    return (1 - t) * torch.sin(5 * t) + 2


def _p1d_poisson_f(x):
    t = x[:, 0]
    return 10 * torch.cos(5 * t) + 25 * (1 - t) * torch.sin(5 * t)


# 1D biharmonic: u = 3x^2 + (x + 1) sin(4x) + 1


def _p1d_biharmonic_u(x):
    t = x[:, 0]
    return 3 * t**2 + (t + 1) * torch.sin(4 * t) + 1


def _p1d_biharmonic_f(x):
    t = x[:, 0]
    return 256 * (t + 1) * torch.sin(4 * t) - 256 * torch.cos(4 * t)


# 2D: u = sin(pi x) sin(pi y) + 2 for every c


def _p2d_u(x):
    return torch.sin(math.pi * x[:, 0]) * torch.sin(math.pi * x[:, 1]) + 2


def _p2d_source(c: float) -> Field:
    def _source(x):
        product = torch.sin(math.pi * x[:, 0]) * torch.sin(math.pi * x[:, 1])
        return (2 * math.pi**2 + c) * product + 2 * c

    return _source


# 3D Poisson: u = exp(x + y + z) sin(pi x) sin(pi y) sin(pi z) + 1


def _p3d_u(x):
    sines = torch.sin(math.pi * x).prod(dim=1)
    return torch.exp(x.sum(dim=1)) * sines + 1


def _p3d_f(x):
    s = torch.sin(math.pi * x)
    c = torch.cos(math.pi * x)
    product = s.prod(dim=1)
    mixed = (
        c[:, 0] * s[:, 1] * s[:, 2]
        + s[:, 0] * c[:, 1] * s[:, 2]
        + s[:, 0] * s[:, 1] * c[:, 2]
    )
    return -torch.exp(x.sum(dim=1)) * (
        3 * (1 - math.pi**2) * product + 2 * math.pi * mixed
    )


def _elliptic(problem_id, dim, c, exact, source, description) -> ProblemSpec:
    return ProblemSpec(
        id=problem_id,
        dim=dim,
        coeff_a=constant(1.0),
        coeff_c=constant(c),
        source_f=source,
        boundary_g=exact,
        exact_u=exact,
        description=description,
    )


EIGEN_C = -2 * math.pi**2 + 0.01

REGISTRY: Dict[str, ProblemSpec] = {
    problem.id: problem
    for problem in (
        _elliptic(
            "p1d_poisson",
            1,
            0.0,
            _p1d_poisson_u,
            _p1d_poisson_f,
            "1D Poisson, u = (1-x)sin(5x)+2",
        ),
        ProblemSpec(
            id="p1d_biharmonic",
            dim=1,
            coeff_a=constant(1.0),
            coeff_c=constant(0.0),
            source_f=_p1d_biharmonic_f,
            boundary_g=_p1d_biharmonic_u,
            exact_u=_p1d_biharmonic_u,
            operator=BIHARMONIC_1D,
            description="1D biharmonic, clamped, u = 3x^2+(x+1)sin(4x)+1",
        ),
        _elliptic(
            "p2d_c0", 2, 0.0, _p2d_u, _p2d_source(0.0), "2D, c = 0, u = sin(pi x)sin(pi y)+2"
        ),
        _elliptic(
            "p2d_cm5", 2, -5.0, _p2d_u, _p2d_source(-5.0), "2D, c = -5, u = sin(pi x)sin(pi y)+2"
        ),
        _elliptic(
            "p2d_eig",
            2,
            EIGEN_C,
            _p2d_u,
            _p2d_source(EIGEN_C),
            "2D, c = -2pi^2+0.01, u = sin(pi x)sin(pi y)+2",
        ),
        _elliptic(
            "p3d_poisson",
            3,
            0.0,
            _p3d_u,
            _p3d_f,
            "3D Poisson, u = exp(x+y+z)sin(pi x)sin(pi y)sin(pi z)+1",
        ),
    )
}


def get_problem(problem_id: str) -> ProblemSpec:
    """Look up a registry problem by id."""
    try:
        return REGISTRY[problem_id]
    except KeyError:
        known = ", ".join(sorted(REGISTRY))
        raise InputError(f"unknown problem id '{problem_id}' (known: {known})") from None
