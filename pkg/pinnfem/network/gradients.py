"""Gradients of scalar losses with respect to network parameters."""

from typing import Callable, Tuple

import numpy as np
import torch

from pinnfem.errors import InputError
from pinnfem.network.dense import DenseNetwork

LossEvaluator = Callable[[DenseNetwork], torch.Tensor]


def value_and_gradient(
    net: DenseNetwork, loss_evaluator: LossEvaluator
) -> Tuple[torch.Tensor, torch.Tensor]:
    """
    Loss value and its gradient with respect to the flat parameter vector.

    The evaluator receives a network sharing the architecture of ``net`` whose
    parameters are a fresh leaf tensor.
    """
    theta = net.parameters.detach().clone().requires_grad_(True)
    loss = loss_evaluator(net.with_parameters(theta))
    if loss.ndim != 0:
        raise InputError(f"loss must be a scalar, got shape {tuple(loss.shape)}")
    if not loss.requires_grad:
        return loss.detach(), torch.zeros_like(theta)
    (grad,) = torch.autograd.grad(loss, theta, allow_unused=True)
    if grad is None:
        grad = torch.zeros_like(theta)
    return loss.detach(), grad


def parameter_gradient(net: DenseNetwork, loss_evaluator: LossEvaluator) -> np.ndarray:
    """∇_θ of the loss, in the order of ``net.parameters``."""
    _, grad = value_and_gradient(net, loss_evaluator)
    return grad.numpy()
