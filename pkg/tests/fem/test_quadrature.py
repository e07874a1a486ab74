from math import factorial

import numpy as np
import pytest

from pinnfem.errors import CapabilityError, InputError
from pinnfem.fem import quadrature_for
from pinnfem.fem.quadrature import MAX_DEGREE, REFERENCE_MEASURE


def _simplex_moment(exponents):
    """∫ x^a y^b z^c over the reference simplex."""
    numerator = np.prod([factorial(e) for e in exponents])
    return numerator / factorial(sum(exponents) + len(exponents))


@pytest.mark.parametrize("cell_type", sorted(MAX_DEGREE))
def test_weights_sum_to_measure(cell_type):
    for degree in (0, 3, MAX_DEGREE[cell_type]):
        rule = quadrature_for(cell_type, degree)
        assert np.all(rule.weights > 0)
        assert rule.weights.sum() == pytest.approx(REFERENCE_MEASURE[cell_type])
        assert rule.exactness_degree >= degree


@pytest.mark.parametrize(
    "cell_type,degree,exponents",
    [
        ("interval", 9, (9,)),
        ("triangle", 6, (4, 2)),
        ("triangle", 13, (6, 7)),
        ("tetrahedron", 5, (2, 1, 2)),
        ("tetrahedron", 10, (3, 3, 4)),
    ],
)
def test_monomials_are_exact(cell_type, degree, exponents):
    rule = quadrature_for(cell_type, degree)
    integrand = np.prod(rule.points ** np.array(exponents), axis=1)
    assert np.dot(rule.weights, integrand) == pytest.approx(_simplex_moment(exponents), rel=1e-12)


def test_points_inside_reference_cell():
    rule = quadrature_for("tetrahedron", 8)
    assert np.all(rule.points > 0)
    assert np.all(rule.points.sum(axis=1) < 1)


def test_rules_are_read_only():
    rule = quadrature_for("triangle", 4)
    with pytest.raises(ValueError):
        rule.weights[0] = 1.0


def test_unsupported_degrees():
    with pytest.raises(CapabilityError):
        quadrature_for("triangle", MAX_DEGREE["triangle"] + 1)
    with pytest.raises(InputError):
        quadrature_for("interval", -1)
    with pytest.raises(InputError):
        quadrature_for("hexahedron", 2)
