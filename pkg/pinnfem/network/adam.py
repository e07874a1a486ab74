"""Adam updates on a flat parameter vector."""

from typing import Tuple

import numpy as np
import torch

from pinnfem.errors import InputError
from pinnfem.network.dense import DTYPE


class AdamState:
    """
    Moment estimates and step count of an Adam optimizer.

    Wraps :class:`torch.optim.Adam` over a single flat float64 parameter.
    """

    learning_rate: float
    beta1: float
    beta2: float
    epsilon: float
    step_count: int
    """Number of updates applied so far."""

    def __init__(
        self,
        size: int,
        learning_rate: float,
        beta1: float = 0.9,
        beta2: float = 0.999,
        epsilon: float = 1e-8,
    ):
        if learning_rate <= 0:
            raise InputError(f"learning rate must be positive, got {learning_rate}")
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.step_count = 0
        self._parameter = torch.zeros(size, dtype=DTYPE, requires_grad=True)
        self._optimizer = torch.optim.Adam(
            [self._parameter],
            lr=learning_rate,
            betas=(beta1, beta2),
            eps=epsilon,
            foreach=False,
        )

    @property
    def size(self) -> int:
        return self._parameter.numel()

    def _moment(self, key: str) -> np.ndarray:
        state = self._optimizer.state.get(self._parameter, {})
        if key not in state:
            return np.zeros(self.size)
        return state[key].detach().numpy().copy()

    @property
    def first_moment(self) -> np.ndarray:
        return self._moment("exp_avg")

    @property
    def second_moment(self) -> np.ndarray:
        return self._moment("exp_avg_sq")


def adam_step(
    state: AdamState, params: torch.Tensor, grads: torch.Tensor
) -> Tuple[torch.Tensor, AdamState]:
    """
    One bias-corrected Adam update.

    :param state: Optimizer state, updated in place and returned.
    :param params: Current flat parameters.
    :param grads: Gradient of the objective at ``params``.
    :return: New parameters (a detached tensor) and the state.
    """
    params = torch.as_tensor(params, dtype=DTYPE).reshape(-1)
    grads = torch.as_tensor(grads, dtype=DTYPE).reshape(-1)
    if params.numel() != state.size or grads.numel() != state.size:
        raise InputError(
            f"Adam state holds {state.size} parameters, "
            f"got {params.numel()} parameters and {grads.numel()} gradients"
        )
    with torch.no_grad():
        state._parameter.copy_(params)
    state._parameter.grad = grads.detach().clone()
    state._optimizer.step()
    state.step_count += 1
    return state._parameter.detach().clone(), state
