import numpy as np
import pytest

from pinnfem.errors import InputError
from pinnfem.pinn import make_collocation
from pinnfem.pinn.collocation import grid_resolution


def test_grid_resolution_rounds_down():
    assert grid_resolution(1, 1000) == 1000
    assert grid_resolution(2, 400) == 20
    assert grid_resolution(2, 399) == 19
    assert grid_resolution(3, 1000) == 10
    assert grid_resolution(3, 999) == 9


def test_interior_points_1d():
    colloc = make_collocation(1, 4)
    np.testing.assert_allclose(colloc.interior_points[:, 0], [0.125, 0.375, 0.625, 0.875])
    np.testing.assert_allclose(colloc.boundary_points[:, 0], [0.0, 1.0])
    assert colloc.interior_weight == 0.25
    assert colloc.boundary_weight == 0.5


def test_boundary_faces_3d():
    colloc = make_collocation(3, 27)
    assert colloc.interior_points.shape == (27, 3)
    assert colloc.boundary_points.shape == (6 * 9, 3)
    on_face = np.any(
        np.isclose(colloc.boundary_points, 0.0) | np.isclose(colloc.boundary_points, 1.0),
        axis=1,
    )
    assert np.all(on_face)
    assert np.all((colloc.interior_points > 0) & (colloc.interior_points < 1))


def test_too_few_points():
    with pytest.raises(InputError):
        make_collocation(2, 3)
    with pytest.raises(InputError):
        make_collocation(4, 100)
