import numpy as np
import pytest

from pinnfem.errors import InputError
from pinnfem.fem import ElementFamily, FunctionSpace, evaluate_fe
from pinnfem.mesh import interval_mesh, tet_mesh, triangle_mesh


def _space(mesh, family="lagrange", degree=1):
    return FunctionSpace(mesh, ElementFamily(family, degree, mesh.dim))


def test_p2_triangle_layout():
    space = _space(triangle_mesh(2), degree=2)
    # 9 vertices and 16 edges
    assert space.n_dofs == 25
    assert space.dof_map.shape == (8, 6)
    assert space.boundary_dofs.size == 16
    on_boundary = np.any(
        np.isclose(space.dof_coordinates, 0) | np.isclose(space.dof_coordinates, 1), axis=1
    )
    np.testing.assert_array_equal(np.sort(space.boundary_dofs), np.flatnonzero(on_boundary))


def test_p3_interval_layout():
    space = _space(interval_mesh(3), degree=3)
    assert space.n_dofs == 10
    np.testing.assert_allclose(np.sort(space.dof_coordinates[:, 0]), np.arange(10) / 9)
    np.testing.assert_array_equal(space.boundary_dofs, [0, 3])


def test_hermite_layout():
    space = _space(interval_mesh(4), "hermite", 3)
    assert space.n_dofs == 10
    np.testing.assert_array_equal(space.dof_map[1], [2, 3, 4, 5])
    np.testing.assert_array_equal(space.boundary_dofs, [0, 1, 8, 9])
    assert space.slope_dofs.tolist() == [False, True] * 5


@pytest.mark.parametrize(
    "mesh,degree",
    [(interval_mesh(5), 2), (triangle_mesh(3), 2), (tet_mesh(2), 1)],
    ids=["interval", "triangle", "tetrahedron"],
)
def test_interpolated_polynomials_are_reproduced(mesh, degree):
    space = _space(mesh, degree=degree)
    coefficients = np.arange(1, mesh.dim + 1)

    def polynomial(x):
        linear = x @ coefficients
        return linear**degree + 1.0

    dofs = polynomial(space.dof_coordinates)
    points = np.random.default_rng(3).random((40, mesh.dim))
    result = evaluate_fe(space, dofs, points, order=1)
    np.testing.assert_allclose(result.value, polynomial(points), atol=1e-12)
    linear = points @ coefficients
    expected_gradient = degree * linear[:, None] ** (degree - 1) * coefficients[None, :]
    np.testing.assert_allclose(result.gradient, expected_gradient, atol=1e-10)


def test_hermite_interpolation_of_cubic():
    space = _space(interval_mesh(3), "hermite", 3)
    x = space.dof_coordinates[:, 0]
    dofs = np.where(space.slope_dofs, 3 * x**2 - 1, x**3 - x)
    points = np.linspace(0, 1, 13).reshape(-1, 1)
    result = evaluate_fe(space, dofs, points, order=2)
    t = points[:, 0]
    np.testing.assert_allclose(result.value, t**3 - t, atol=1e-13)
    np.testing.assert_allclose(result.hessian[:, 0, 0], 6 * t, atol=1e-10)


def test_evaluate_checks_dof_count():
    space = _space(interval_mesh(3))
    with pytest.raises(InputError):
        evaluate_fe(space, np.zeros(3), [[0.5]])


def test_dimension_mismatch():
    with pytest.raises(InputError):
        FunctionSpace(interval_mesh(2), ElementFamily("lagrange", 1, 2))


def test_enriched_space_needs_network():
    with pytest.raises(InputError):
        FunctionSpace(interval_mesh(2), ElementFamily("lagrange", 1, 1), "additive")
