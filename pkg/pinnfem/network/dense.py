"""Small fully-connected networks evaluated in float64."""

from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import torch

from pinnfem.errors import CapabilityError, InputError

DTYPE = torch.float64

TANH = "tanh"
ACTIVATIONS = (TANH,)

BOUNDARY_NONE = "none"
BOUNDARY_DIRICHLET_PRODUCT = "dirichlet_product"
BOUNDARY_MODES = (BOUNDARY_NONE, BOUNDARY_DIRICHLET_PRODUCT)

TensorLike = Union[torch.Tensor, np.ndarray, Sequence[float]]


def parameter_count(layer_sizes: Sequence[int]) -> int:
    """Number of trainable parameters of a dense network with these layer sizes."""
    return sum(
        n_out * n_in + n_out for n_in, n_out in zip(layer_sizes[:-1], layer_sizes[1:])
    )


def check_layer_sizes(layer_sizes: Sequence[int]) -> Tuple[int, ...]:
    sizes = tuple(int(size) for size in layer_sizes)
    if len(sizes) < 3:
        raise InputError(
            f"a network needs at least one hidden layer, got layers {list(sizes)}"
        )
    if any(size < 1 for size in sizes):
        raise InputError(f"layer sizes must be positive, got {list(sizes)}")
    if sizes[-1] != 1:
        raise InputError(f"the output layer must have size 1, got {sizes[-1]}")
    return sizes


class DenseNetwork:
    """
    Fully-connected network u_θ: R^d -> R with tanh hidden layers.

    All parameters live in one flat float64 tensor, ordered layer by layer:
    the weight matrix of the layer (row-major, output x input) followed by its
    bias vector. ``weights`` and ``biases`` are views into that tensor, so a
    network built around a leaf tensor that requires grad is differentiable
    with respect to it.
    """

    layer_sizes: Tuple[int, ...]
    """Sizes of every layer, input dimension first, output (1) last."""
    parameters: torch.Tensor
    """Flat parameter vector."""
    activation: str = TANH
    """Activation applied on every hidden layer."""
    boundary_mode: str = BOUNDARY_NONE
    """Whether the network is meant to be wrapped by the Dirichlet boundary operator."""
    shift: float = 0.0
    """Constant added to the network by the multiplicative enrichment."""

    def __init__(
        self,
        layer_sizes: Sequence[int],
        parameters: Optional[TensorLike] = None,
        activation: str = TANH,
        boundary_mode: str = BOUNDARY_NONE,
        shift: float = 0.0,
    ):
        """
        Dense network.

        :param layer_sizes: Layer sizes, e.g. ``(1, 20, 1)``.
        :param parameters: Flat parameter vector; zeros when not given.
            A float64 tensor is used as is, without copying.
        :param activation: Activation tag, only ``tanh`` is supported.
        :param boundary_mode: ``none`` or ``dirichlet_product``.
        :param shift: Constant shift recorded with the network.
        """
        self.layer_sizes = check_layer_sizes(layer_sizes)
        if activation not in ACTIVATIONS:
            raise CapabilityError(f"unsupported activation '{activation}'")
        if boundary_mode not in BOUNDARY_MODES:
            raise InputError(f"unknown boundary mode '{boundary_mode}'")
        self.activation = activation
        self.boundary_mode = boundary_mode
        self.shift = float(shift)

        size = parameter_count(self.layer_sizes)
        if parameters is None:
            self.parameters = torch.zeros(size, dtype=DTYPE)
        else:
            self.parameters = torch.as_tensor(parameters, dtype=DTYPE).reshape(-1)
        if self.parameters.numel() != size:
            raise InputError(
                f"expected {size} parameters for layers {list(self.layer_sizes)}, "
                f"got {self.parameters.numel()}"
            )

        self._slices: List[Tuple[int, int, int]] = []
        start = 0
        for n_in, n_out in zip(self.layer_sizes[:-1], self.layer_sizes[1:]):
            weight_end = start + n_out * n_in
            self._slices.append((start, weight_end, weight_end + n_out))
            start = weight_end + n_out

    @property
    def dim(self) -> int:
        """Spatial dimension of the input."""
        return self.layer_sizes[0]

    @property
    def weights(self) -> List[torch.Tensor]:
        """Per-layer weight matrices, output x input."""
        return [
            self.parameters[start:end].view(n_out, n_in)
            for (start, end, _), n_in, n_out in zip(
                self._slices, self.layer_sizes[:-1], self.layer_sizes[1:]
            )
        ]

    @property
    def biases(self) -> List[torch.Tensor]:
        """Per-layer bias vectors."""
        return [self.parameters[end:bias_end] for _, end, bias_end in self._slices]

    def with_parameters(self, parameters: TensorLike) -> "DenseNetwork":
        """Same architecture and tags, other parameters (not copied)."""
        return DenseNetwork(
            self.layer_sizes,
            parameters,
            activation=self.activation,
            boundary_mode=self.boundary_mode,
            shift=self.shift,
        )

    def copy(self) -> "DenseNetwork":
        """Detached copy of the network."""
        return self.with_parameters(self.parameters.detach().clone())

    def __call__(self, x: torch.Tensor) -> torch.Tensor:
        """
        Raw network output for a batch of points.

        :param x: Tensor of shape ``(N, d)``.
        :return: Tensor of shape ``(N,)``; no boundary operator, no shift.
        """
        if x.shape[-1] != self.dim:
            raise InputError(
                f"network expects points of dimension {self.dim}, got {x.shape[-1]}"
            )
        hidden = x
        last = len(self._slices) - 1
        for layer, (weight, bias) in enumerate(zip(self.weights, self.biases)):
            hidden = torch.nn.functional.linear(hidden, weight, bias)
            if layer < last:
                hidden = torch.tanh(hidden)
        return hidden[..., 0]

    def __repr__(self) -> str:
        return (
            f"DenseNetwork(layers={list(self.layer_sizes)}, "
            f"boundary_mode={self.boundary_mode}, shift={self.shift})"
        )


def init_network(
    layer_sizes: Sequence[int],
    seed: int,
    boundary_mode: str = BOUNDARY_NONE,
) -> DenseNetwork:
    """
    Glorot-uniform initialization, biases zero.

    Weights of each layer are drawn uniformly on ``[-r, r]`` with
    ``r = sqrt(6 / (n_in + n_out))``, layer by layer in parameter order.

    The generator is numpy's ``default_rng(seed)``: a PCG64 stream whose
    state is expanded from ``seed`` by ``SeedSequence``, a splitmix-style
    hash. Checkpoints record the weights themselves, so a change of numpy
    generator only affects freshly trained networks.

    :param layer_sizes: Layer sizes.
    :param seed: Non-negative integer seed.
    :param boundary_mode: Boundary tag stored on the network.
    """
    sizes = check_layer_sizes(layer_sizes)
    rng = np.random.default_rng(seed)
    chunks = []
    for n_in, n_out in zip(sizes[:-1], sizes[1:]):
        limit = np.sqrt(6.0 / (n_in + n_out))
        chunks.append(rng.uniform(-limit, limit, size=n_out * n_in))
        chunks.append(np.zeros(n_out))
    parameters = torch.from_numpy(np.concatenate(chunks))
    return DenseNetwork(sizes, parameters, boundary_mode=boundary_mode)


def forward(net: DenseNetwork, x: TensorLike) -> float:
    """
    Raw output of the network at a single point.

    :param net: The network.
    :param x: A point of R^d.
    """
    point = torch.as_tensor(x, dtype=DTYPE).reshape(-1)
    if point.numel() != net.dim:
        raise InputError(
            f"network expects points of dimension {net.dim}, got {point.numel()}"
        )
    with torch.no_grad():
        return float(net(point.reshape(1, -1))[0])
