import numpy as np
import pytest

from pinnfem.analysis import error_norms
from pinnfem.enrichment import evaluate_enriched, solve_additive, solve_multiplicative
from pinnfem.errors import InputError, ShiftError
from pinnfem.fem import ElementFamily, FunctionSpace, solve_classical
from pinnfem.mesh import interval_mesh, tet_mesh, triangle_mesh
from pinnfem.network import DenseNetwork
from pinnfem.pinn import get_problem
from tests.utils import seeded_network, sine_field


def _p1(mesh):
    return FunctionSpace(mesh, ElementFamily("lagrange", 1, mesh.dim))


@pytest.fixture
def poisson_1d():
    problem = get_problem("p1d_poisson")
    space = _p1(interval_mesh(10))
    classical = error_norms(solve_classical(problem, space), problem)
    return problem, space, classical


def test_additive_with_exact_prior(poisson_1d):
    problem, space, classical = poisson_1d
    solution = solve_additive(problem, space, problem.exact_u)
    errors = error_norms(solution, problem)
    assert errors.l2 < 1e-4 * classical.l2
    # w_h carries only quadrature noise
    assert np.abs(solution.aux_dofs).max() < 1e-6


def test_multiplicative_with_exact_prior(poisson_1d):
    problem, space, classical = poisson_1d
    solution = solve_multiplicative(problem, space, problem.exact_u)
    assert solution.plan.shift == 0.0
    assert error_norms(solution, problem).l2 < 1e-4 * classical.l2
    np.testing.assert_allclose(solution.aux_dofs, 1.0, atol=1e-6)


def test_multiplicative_shift_is_undone():
    problem = get_problem("p2d_c0")
    space = _p1(triangle_mesh(8))

    def prior(x):
        return sine_field(x) + 0.05 * x[:, 0]

    solution = solve_multiplicative(problem, space, prior, margin=0.5)
    assert solution.plan.shift == pytest.approx(0.5)
    assert solution.offset == solution.plan.shift
    assert error_norms(solution, problem).l2 < 0.05
    values = evaluate_enriched(solution, [[0.0, 0.5], [0.5, 0.0]]).value
    np.testing.assert_allclose(values, 2.0, atol=1e-12)


def test_multiplicative_margin_violation(poisson_1d):
    problem, space, _ = poisson_1d
    with pytest.raises(ShiftError):
        solve_multiplicative(problem, space, lambda x: x[:, 0] - 0.5, shift=0.2)


def test_additive_biharmonic():
    problem = get_problem("p1d_biharmonic")
    space = FunctionSpace(interval_mesh(5), ElementFamily("hermite", 3, 1))
    classical = error_norms(solve_classical(problem, space), problem)
    errors = error_norms(solve_additive(problem, space, problem.exact_u), problem)
    assert errors.l2 < 1e-3 * classical.l2
    assert errors.h2 < 1e-3 * classical.h2


def test_additive_solution_matches_boundary_data():
    problem = get_problem("p1d_poisson")
    net = seeded_network((1, 8, 1), seed=0, boundary_mode="dirichlet_product")
    solution = solve_additive(problem, _p1(interval_mesh(8)), net)
    ends = evaluate_enriched(solution, [[0.0], [1.0]]).value
    np.testing.assert_allclose(ends, 2.0, atol=1e-12)


def test_enriched_evaluation_order(poisson_1d):
    problem, space, _ = poisson_1d
    solution = solve_additive(problem, space, problem.exact_u)
    with pytest.raises(InputError):
        evaluate_enriched(solution, [[0.5]], order=2)
    gradient = evaluate_enriched(solution, [[0.5]], order=1).gradient
    expected = -np.sin(2.5) + 5 * 0.5 * np.cos(2.5)
    assert gradient[0, 0] == pytest.approx(expected, abs=1e-4)


def test_enriched_base_must_be_classical(poisson_1d):
    problem, space, _ = poisson_1d
    enriched = space.enriched("additive", problem.exact_u)
    with pytest.raises(InputError):
        solve_additive(problem, enriched, problem.exact_u)


def _constant_network(dim, value):
    net = DenseNetwork((dim, 3, 1))
    net.parameters[-1] = value
    return net


@pytest.mark.parametrize(
    "problem_id,mesh",
    [("p1d_poisson", interval_mesh(10)), ("p2d_cm5", triangle_mesh(4))],
    ids=["1d", "2d"],
)
def test_trivial_priors_reduce_to_classical(problem_id, mesh):
    problem = get_problem(problem_id)
    space = _p1(mesh)
    classical = solve_classical(problem, space)
    additive = solve_additive(problem, space, _constant_network(mesh.dim, 0.0))
    multiplicative = solve_multiplicative(problem, space, _constant_network(mesh.dim, 1.0))
    assert multiplicative.plan.shift == 0.0
    np.testing.assert_allclose(additive.aux_dofs, classical.dofs, atol=1e-10)
    np.testing.assert_allclose(multiplicative.aux_dofs, classical.dofs, atol=1e-10)


@pytest.mark.parametrize("solve", [solve_additive, solve_multiplicative])
@pytest.mark.parametrize(
    "problem_id,mesh,family,degree,quadrature_degree",
    [
        ("p1d_poisson", interval_mesh(5), "lagrange", 1, None),
        ("p1d_biharmonic", interval_mesh(5), "hermite", 3, None),
        ("p2d_c0", triangle_mesh(4), "lagrange", 1, 25),
        ("p2d_cm5", triangle_mesh(4), "lagrange", 1, 25),
        ("p2d_eig", triangle_mesh(4), "lagrange", 1, 25),
        ("p3d_poisson", tet_mesh(2), "lagrange", 1, 19),
    ],
    ids=lambda value: value if isinstance(value, str) else None,
)
def test_exact_prior_is_reproduced(solve, problem_id, mesh, family, degree, quadrature_degree):
    problem = get_problem(problem_id)
    space = FunctionSpace(mesh, ElementFamily(family, degree, mesh.dim))
    solution = solve(problem, space, problem.exact_u, quadrature_degree=quadrature_degree)
    assert error_norms(solution, problem).l2 < 1e-9
