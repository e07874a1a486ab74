"""Pointwise derivatives of scalar fields, computed with torch autograd."""

from typing import Callable, NamedTuple, Optional, Sequence, Union

import numpy as np
import torch

from pinnfem.errors import CapabilityError, InputError
from pinnfem.network.dense import DTYPE

Field = Callable[[torch.Tensor], torch.Tensor]
"""A scalar field: maps a ``(N, d)`` tensor of points to a ``(N,)`` tensor."""

MAX_ORDER_1D = 4
MAX_ORDER = 2
CHUNK_SIZE = 200_000


class TensorJet(NamedTuple):
    """Derivatives of a field at a batch of points, as tensors."""

    value: torch.Tensor
    gradient: Optional[torch.Tensor]
    hessian: Optional[torch.Tensor]
    derivatives: Optional[torch.Tensor]
    """1D only: column k holds the k-th derivative."""


class JetValue(NamedTuple):
    """Derivatives of a field as numpy arrays."""

    value: np.ndarray
    gradient: Optional[np.ndarray] = None
    hessian: Optional[np.ndarray] = None
    derivatives: Optional[np.ndarray] = None


def check_order(dim: int, order: int) -> None:
    if order < 0:
        raise InputError(f"derivative order must be non-negative, got {order}")
    limit = MAX_ORDER_1D if dim == 1 else MAX_ORDER
    if order > limit:
        raise CapabilityError(
            f"derivatives of order {order} are not available in dimension {dim}"
        )


def _grad(output: torch.Tensor, inputs: torch.Tensor, create_graph: bool):
    if not output.requires_grad:
        return torch.zeros_like(inputs)
    (grad,) = torch.autograd.grad(
        output.sum(),
        inputs,
        create_graph=create_graph,
        retain_graph=True,
        allow_unused=True,
    )
    if grad is None:
        return torch.zeros_like(inputs)
    return grad


def jet_tensors(
    fn: Field, x: torch.Tensor, order: int, create_graph: bool = False
) -> TensorJet:
    """
    Value and derivatives of ``fn`` at the points ``x``.

    In 1D, derivatives up to order 4 are returned in ``derivatives``;
    ``gradient`` and ``hessian`` are filled from it. In 2D and 3D, order 1
    gives the gradient and order 2 the symmetrized Hessian.

    :param fn: The field.
    :param x: Points, shape ``(N, d)``.
    :param order: Highest derivative order.
    :param create_graph: Keep the graph so results can be differentiated
        again, e.g. with respect to network parameters.
    """
    dim = x.shape[-1]
    check_order(dim, order)
    if order == 0:
        return TensorJet(fn(x), None, None, None)

    x = x.detach().requires_grad_(True)
    value = fn(x)
    if dim == 1:
        columns = [value]
        current = value
        for step in range(order):
            current = _grad(current, x, create_graph or step + 1 < order)[:, 0]
            columns.append(current)
        derivatives = torch.stack(columns, dim=1)
        hessian = derivatives[:, 2].reshape(-1, 1, 1) if order >= 2 else None
        return TensorJet(value, derivatives[:, 1:2], hessian, derivatives)

    gradient = _grad(value, x, create_graph or order > 1)
    hessian = None
    if order == 2:
        rows = [_grad(gradient[:, axis], x, create_graph) for axis in range(dim)]
        hessian = torch.stack(rows, dim=1)
        hessian = 0.5 * (hessian + hessian.transpose(1, 2))
    return TensorJet(value, gradient, hessian, None)


def as_points(x: Union[np.ndarray, Sequence[float], torch.Tensor]) -> torch.Tensor:
    points = torch.as_tensor(np.asarray(x, dtype=np.float64), dtype=DTYPE)
    if points.ndim == 1:
        points = points.reshape(1, -1)
    if points.ndim != 2:
        raise InputError(f"points must be an (N, d) array, got shape {tuple(points.shape)}")
    return points


def _to_numpy(tensor: Optional[torch.Tensor]) -> Optional[np.ndarray]:
    return None if tensor is None else tensor.detach().numpy()


def evaluate_jet(fn: Field, x, order: int) -> JetValue:
    """
    Evaluate a jet as numpy arrays.

    A single point (a 1-D array of length d) gives arrays without the leading
    batch axis; an ``(N, d)`` array gives batched arrays.

    ``fn`` is differentiated exactly as given. A raw :class:`DenseNetwork`
    yields the derivatives of u_θ, without the Dirichlet boundary operator or
    the shift; pass ``pinnfem.pinn.surrogate_for(net, problem)`` to get those
    of ū_θ.
    """
    single = np.ndim(x) == 1
    points = as_points(x)
    parts = []
    for start in range(0, max(points.shape[0], 1), CHUNK_SIZE):
        jet = jet_tensors(fn, points[start : start + CHUNK_SIZE], order)
        parts.append([_to_numpy(item) for item in jet])
    merged = [
        None if parts[0][slot] is None else np.concatenate([p[slot] for p in parts])
        for slot in range(4)
    ]
    if single:
        merged = [None if item is None else item[0] for item in merged]
    return JetValue(*merged)


def evaluate_field(fn: Field, points) -> np.ndarray:
    """Values of ``fn`` at ``points`` of shape ``(..., d)``, as a numpy array."""
    array = np.asarray(points, dtype=np.float64)
    flat = array.reshape(-1, array.shape[-1])
    values = np.empty(flat.shape[0])
    with torch.no_grad():
        for start in range(0, flat.shape[0], CHUNK_SIZE):
            chunk = torch.from_numpy(np.ascontiguousarray(flat[start : start + CHUNK_SIZE]))
            values[start : start + CHUNK_SIZE] = fn(chunk).numpy()
    return values.reshape(array.shape[:-1])
