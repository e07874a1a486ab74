from pinnfem.fem.assembly import AssembledSystem, apply_dirichlet, assemble, dump_matrix
from pinnfem.fem.elements import HERMITE, LAGRANGE, ElementFamily, reference_basis
from pinnfem.fem.quadrature import QuadratureRule, quadrature_for
from pinnfem.fem.solver import SolveResult, solve, solve_classical, solve_galerkin
from pinnfem.fem.space import (
    ADDITIVE,
    CLASSICAL,
    MULTIPLICATIVE,
    FESolution,
    FEValue,
    FunctionSpace,
    evaluate_fe,
)
