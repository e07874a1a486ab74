import numpy as np
import pytest
import torch

from pinnfem.errors import CapabilityError, InputError
from pinnfem.network import evaluate_field, evaluate_jet
from tests.utils import finite_difference, seeded_network, sine_field


def test_polynomial_derivatives_1d():
    jet = evaluate_jet(lambda x: x[:, 0] ** 4, [[0.5]], order=4)
    assert jet.derivatives[0] == pytest.approx([0.0625, 0.5, 3.0, 12.0, 24.0])
    assert jet.gradient[0, 0] == pytest.approx(0.5)
    assert jet.hessian[0, 0, 0] == pytest.approx(3.0)


def test_single_point_is_unbatched():
    jet = evaluate_jet(sine_field, np.array([0.25, 0.5]), order=2)
    assert np.ndim(jet.value) == 0
    assert jet.gradient.shape == (2,)
    assert jet.hessian.shape == (2, 2)


def test_sine_hessian_2d():
    point = np.array([[0.25, 0.5]])
    jet = evaluate_jet(sine_field, point, order=2)
    s, c = np.sin(np.pi * point[0]), np.cos(np.pi * point[0])
    expected = np.pi**2 * np.array([[-s[0] * s[1], c[0] * c[1]], [c[0] * c[1], -s[0] * s[1]]])
    np.testing.assert_allclose(jet.hessian[0], expected, atol=1e-12)
    np.testing.assert_allclose(jet.hessian[0], jet.hessian[0].T)


def test_network_gradient_matches_finite_differences():
    net = seeded_network((3, 8, 8, 1), seed=2)
    points = np.random.default_rng(0).uniform(size=(5, 3))
    jet = evaluate_jet(net, points, order=1)
    for axis in range(3):
        np.testing.assert_allclose(
            jet.gradient[:, axis], finite_difference(net, points, axis), atol=1e-8
        )


def test_fourth_derivative_of_network_is_finite():
    net = seeded_network((1, 20, 1), seed=0)
    jet = evaluate_jet(net, np.linspace(0, 1, 11).reshape(-1, 1), order=4)
    assert jet.derivatives.shape == (11, 5)
    assert np.all(np.isfinite(jet.derivatives))


def test_order_limits():
    with pytest.raises(CapabilityError):
        evaluate_jet(sine_field, [[0.1, 0.2]], order=3)
    with pytest.raises(InputError):
        evaluate_jet(sine_field, [[0.1, 0.2]], order=-1)


def test_constant_field_has_zero_derivatives():
    jet = evaluate_jet(lambda x: torch.ones(x.shape[0], dtype=x.dtype), [[0.1, 0.9]], 2)
    assert np.all(jet.gradient == 0)
    assert np.all(jet.hessian == 0)


def test_evaluate_field_keeps_grid_shape():
    grid = np.stack(np.meshgrid(np.linspace(0, 1, 4), np.linspace(0, 1, 3)), axis=-1)
    values = evaluate_field(sine_field, grid)
    assert values.shape == (3, 4)
    np.testing.assert_allclose(values[:, 0], 0.0, atol=1e-15)


def test_network_derivatives_1d_match_finite_differences():
    net = seeded_network((1, 20, 1), seed=0)
    x, step = 0.37, 1e-5
    center = evaluate_jet(net, [[x]], order=4).derivatives[0]
    shifted = evaluate_jet(net, [[x - step], [x + step]], order=4).derivatives
    for order in range(1, 5):
        # central difference of the next-lower derivative
        expected = (shifted[1, order - 1] - shifted[0, order - 1]) / (2 * step)
        assert center[order] == pytest.approx(expected, rel=1e-6, abs=1e-7)


def test_network_fourth_derivative_from_values_only():
    net = seeded_network((1, 20, 1), seed=0)
    x, h = 0.37, 1e-2
    points = x + h * np.arange(-2, 3).reshape(-1, 1)
    values = evaluate_field(net, points)
    stencil = (values[0] - 4 * values[1] + 6 * values[2] - 4 * values[3] + values[4]) / h**4
    second = (values[1] - 2 * values[2] + values[3]) / h**2
    jet = evaluate_jet(net, [[x]], order=4).derivatives[0]
    assert jet[2] == pytest.approx(second, rel=1e-3, abs=1e-4)
    assert jet[4] == pytest.approx(stencil, rel=1e-2, abs=1e-3)


@pytest.mark.parametrize("dim", [2, 3])
def test_network_hessian_matches_finite_differences(dim):
    net = seeded_network((dim, 8, 8, 1), seed=dim)
    points = np.random.default_rng(dim).uniform(0.1, 0.9, size=(4, dim))
    hessian = evaluate_jet(net, points, order=2).hessian
    step = 1e-5
    for axis in range(dim):
        offset = np.zeros(dim)
        offset[axis] = step
        plus = evaluate_jet(net, points + offset, order=1).gradient
        minus = evaluate_jet(net, points - offset, order=1).gradient
        np.testing.assert_allclose(hessian[:, axis, :], (plus - minus) / (2 * step), atol=1e-7)
    np.testing.assert_allclose(hessian, hessian.transpose(0, 2, 1))
