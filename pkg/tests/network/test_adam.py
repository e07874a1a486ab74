import numpy as np
import pytest
import torch

from pinnfem.errors import InputError
from pinnfem.network import AdamState, adam_step, init_network, parameter_gradient


def test_first_step_moves_by_learning_rate():
    state = AdamState(3, learning_rate=0.01)
    params = torch.tensor([1.0, -2.0, 0.5], dtype=torch.float64)
    grads = torch.tensor([0.3, -4.0, 0.0], dtype=torch.float64)
    new_params, state = adam_step(state, params, grads)
    # bias correction makes the first update ±lr wherever the gradient is non-zero
    np.testing.assert_allclose(new_params.numpy(), [0.99, -1.99, 0.5], atol=1e-9)
    assert state.step_count == 1
    np.testing.assert_allclose(state.first_moment, 0.1 * grads.numpy())
    np.testing.assert_allclose(state.second_moment, 0.001 * grads.numpy() ** 2)


def test_matches_reference_update():
    lr, beta1, beta2, eps = 0.05, 0.9, 0.999, 1e-8
    state = AdamState(2, lr, beta1, beta2, eps)
    params = np.array([0.2, 0.4])
    m = np.zeros(2)
    v = np.zeros(2)
    for step in range(1, 4):
        grads = np.array([params[0] * 2, np.sin(params[1])])
        m = beta1 * m + (1 - beta1) * grads
        v = beta2 * v + (1 - beta2) * grads**2
        expected = params - lr * (m / (1 - beta1**step)) / (
            np.sqrt(v / (1 - beta2**step)) + eps
        )
        new_params, state = adam_step(state, torch.from_numpy(params), torch.from_numpy(grads))
        np.testing.assert_allclose(new_params.numpy(), expected, rtol=1e-12)
        params = new_params.numpy()


def test_length_mismatch():
    state = AdamState(3, learning_rate=0.01)
    with pytest.raises(InputError):
        adam_step(state, torch.zeros(2), torch.zeros(2))


def test_non_positive_learning_rate():
    with pytest.raises(InputError):
        AdamState(3, learning_rate=0.0)


def test_parameter_gradient_of_output_bias():
    net = init_network((1, 4, 1), seed=0)

    def mean_output(candidate):
        return candidate(torch.tensor([[0.3], [0.7]], dtype=torch.float64)).mean()

    grad = parameter_gradient(net, mean_output)
    assert grad.shape == (net.parameters.numel(),)
    # the output bias enters every output with coefficient one
    assert grad[-1] == pytest.approx(1.0)


def test_parameter_gradient_matches_finite_differences():
    net = init_network((2, 5, 1), seed=4)
    points = torch.tensor([[0.1, 0.9], [0.4, 0.3], [0.8, 0.5]], dtype=torch.float64)

    def squared_output(candidate):
        return (candidate(points) ** 2).sum()

    grad = parameter_gradient(net, squared_output)
    step = 1e-6
    for index in (0, 7, 12, net.parameters.numel() - 1):
        plus, minus = net.copy(), net.copy()
        plus.parameters[index] += step
        minus.parameters[index] -= step
        expected = (float(squared_output(plus)) - float(squared_output(minus))) / (2 * step)
        assert grad[index] == pytest.approx(expected, rel=1e-4, abs=1e-8)
