import numpy as np
import pytest

from pinnfem.errors import CapabilityError, InputError
from pinnfem.fem import ElementFamily, reference_basis
from pinnfem.fem.elements import SUPPORTED

LAGRANGE_ELEMENTS = [
    ElementFamily("lagrange", degree, dim)
    for (family, dim), degrees in SUPPORTED.items()
    if family == "lagrange"
    for degree in degrees
]


@pytest.mark.parametrize("element", LAGRANGE_ELEMENTS, ids=lambda e: f"{e}-{e.dim}d")
def test_lagrange_nodal_property(element):
    nodes = np.array([dof.point for dof in element.descriptors])
    values = reference_basis(element, nodes).values
    np.testing.assert_allclose(values, np.eye(element.dofs_per_cell), atol=1e-12)


@pytest.mark.parametrize("element", LAGRANGE_ELEMENTS, ids=lambda e: f"{e}-{e.dim}d")
def test_partition_of_unity(element):
    points = np.random.default_rng(1).dirichlet(np.ones(element.dim + 1), 20)[:, 1:]
    basis = reference_basis(element, points, order=2)
    np.testing.assert_allclose(basis.values.sum(axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(basis.gradients.sum(axis=1), 0.0, atol=1e-11)
    np.testing.assert_allclose(basis.hessians.sum(axis=1), 0.0, atol=1e-10)


def test_dof_counts():
    assert ElementFamily("lagrange", 3, 1).dofs_per_cell == 4
    assert ElementFamily("lagrange", 2, 2).dofs_per_cell == 6
    assert ElementFamily("lagrange", 1, 3).dofs_per_cell == 4
    assert ElementFamily("hermite", 3, 1).dofs_per_cell == 4
    assert str(ElementFamily("lagrange", 2, 2)) == "P2"
    assert str(ElementFamily("hermite", 3, 1)) == "H3"


def test_p2_triangle_edge_midpoints():
    points = [dof.point for dof in ElementFamily("lagrange", 2, 2).descriptors[3:]]
    assert points == [(0.5, 0.0), (0.5, 0.5), (0.0, 0.5)]


def test_hermite_interpolation_conditions():
    element = ElementFamily("hermite", 3, 1)
    ends = reference_basis(element, [[0.0], [1.0]], order=1)
    np.testing.assert_allclose(ends.values, [[1, 0, 0, 0], [0, 0, 1, 0]], atol=1e-15)
    np.testing.assert_allclose(ends.gradients[:, :, 0], [[0, 1, 0, 0], [0, 0, 0, 1]], atol=1e-15)


def test_hermite_reproduces_cubics():
    element = ElementFamily("hermite", 3, 1)
    t = np.linspace(0, 1, 7).reshape(-1, 1)
    # p(t) = 2 - t + 3 t^3: p(0) = 2, p'(0) = -1, p(1) = 4, p'(1) = 8
    basis = reference_basis(element, t, order=2)
    coefficients = np.array([2.0, -1.0, 4.0, 8.0])
    np.testing.assert_allclose(basis.values @ coefficients, 2 - t[:, 0] + 3 * t[:, 0] ** 3)
    np.testing.assert_allclose(basis.hessians[:, :, 0, 0] @ coefficients, 18 * t[:, 0])


def test_unsupported_elements():
    with pytest.raises(CapabilityError):
        ElementFamily("lagrange", 2, 3)
    with pytest.raises(CapabilityError):
        ElementFamily("hermite", 3, 2)
    with pytest.raises(CapabilityError):
        reference_basis(ElementFamily("lagrange", 1, 1), [[0.5]], order=3)


def test_points_outside_reference_cell():
    with pytest.raises(InputError):
        reference_basis(ElementFamily("lagrange", 1, 2), [[0.7, 0.7]])
