import numpy as np
import pytest
from scipy.integrate import quad

from pinnfem.analysis import error_norms
from pinnfem.errors import CapabilityError
from pinnfem.fem import ElementFamily, FESolution, FunctionSpace
from pinnfem.mesh import interval_mesh, triangle_mesh
from pinnfem.pinn import get_problem


def test_zero_solution_gives_norms_of_exact():
    # u = (1 - x) sin(5x) + 2 against u_h = 0
    problem = get_problem("p1d_poisson")
    space = FunctionSpace(interval_mesh(8), ElementFamily("lagrange", 1, 1))
    errors = error_norms(FESolution(space, np.zeros(space.n_dofs)), problem)
    l2_sq, _ = quad(lambda x: ((1 - x) * np.sin(5 * x) + 2) ** 2, 0, 1)
    semi_sq, _ = quad(lambda x: (-np.sin(5 * x) + 5 * (1 - x) * np.cos(5 * x)) ** 2, 0, 1)
    assert errors.l2 == pytest.approx(np.sqrt(l2_sq), rel=1e-10)
    assert errors.h1_semi == pytest.approx(np.sqrt(semi_sq), rel=1e-10)
    assert errors.h1 == pytest.approx(np.hypot(errors.l2, errors.h1_semi))
    assert errors.h2 is None


def test_offset_is_subtracted():
    problem = get_problem("p2d_c0")
    space = FunctionSpace(triangle_mesh(2), ElementFamily("lagrange", 1, 2))
    shifted = FESolution(space, np.full(space.n_dofs, 5.0), offset=3.0)
    plain = FESolution(space, np.full(space.n_dofs, 2.0))
    assert error_norms(shifted, problem).l2 == pytest.approx(error_norms(plain, problem).l2)


def test_h2_only_in_1d():
    problem = get_problem("p2d_c0")
    space = FunctionSpace(triangle_mesh(2), ElementFamily("lagrange", 1, 2))
    with pytest.raises(CapabilityError):
        error_norms(FESolution(space, np.zeros(space.n_dofs)), problem, include_h2=True)
