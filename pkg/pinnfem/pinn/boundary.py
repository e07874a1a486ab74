"""Exact Dirichlet enforcement: ū_θ = D·u_θ + G + C."""

from typing import Union

import torch

from pinnfem.errors import InputError
from pinnfem.network.dense import BOUNDARY_DIRICHLET_PRODUCT, DenseNetwork
from pinnfem.network.jets import Field, evaluate_jet
from pinnfem.pinn.problems import ProblemSpec


def distance_factor(problem: ProblemSpec, x: torch.Tensor) -> torch.Tensor:
    """D(x), zero on the boundary (together with its slope for the biharmonic operator)."""
    if problem.is_biharmonic:
        t = x[:, 0]
        return t**2 * (1 - t) ** 2
    return (x * (1 - x)).prod(dim=1)


class HermiteExtension:
    """Cubic on [0,1] matching the boundary values and slopes of g."""

    def __init__(self, boundary_g: Field):
        jet = evaluate_jet(boundary_g, [[0.0], [1.0]], 1)
        self.values = [float(v) for v in jet.value]
        self.slopes = [float(s) for s in jet.gradient[:, 0]]

    def __call__(self, x: torch.Tensor) -> torch.Tensor:
        t = x[:, 0]
        return (
            self.values[0] * (1 - 3 * t**2 + 2 * t**3)
            + self.slopes[0] * (t - 2 * t**2 + t**3)
            + self.values[1] * (3 * t**2 - 2 * t**3)
            + self.slopes[1] * (-(t**2) + t**3)
        )


class BoundaryOperatedNetwork:
    """ū_θ(x) = D(x)·u_θ(x) + G(x) + C, with G the extension of the boundary data."""

    network: DenseNetwork
    problem: ProblemSpec
    shift: float

    def __init__(self, network: DenseNetwork, problem: ProblemSpec):
        if network.dim != problem.dim:
            raise InputError(
                f"network dimension {network.dim} does not match problem dimension {problem.dim}"
            )
        self.network = network
        self.problem = problem
        self.shift = network.shift
        if problem.is_biharmonic:
            self.extension: Field = HermiteExtension(problem.boundary_g)
        else:
            self.extension = problem.boundary_g

    def __call__(self, x: torch.Tensor) -> torch.Tensor:
        values = distance_factor(self.problem, x) * self.network(x) + self.extension(x)
        if self.shift:
            values = values + self.shift
        return values


class ShiftedNetwork:
    """u_θ(x) + C for networks trained without the boundary operator."""

    def __init__(self, network: DenseNetwork):
        self.network = network
        self.shift = network.shift

    def __call__(self, x: torch.Tensor) -> torch.Tensor:
        return self.network(x) + self.shift


def apply_boundary_operator(
    net: DenseNetwork, problem: ProblemSpec
) -> BoundaryOperatedNetwork:
    """Wrap ``net`` so that it satisfies the Dirichlet data of ``problem`` exactly."""
    if net.boundary_mode != BOUNDARY_DIRICHLET_PRODUCT:
        raise InputError(
            f"network boundary mode is '{net.boundary_mode}', "
            f"expected '{BOUNDARY_DIRICHLET_PRODUCT}'"
        )
    return BoundaryOperatedNetwork(net, problem)


def surrogate_for(net: Union[DenseNetwork, Field], problem: ProblemSpec) -> Field:
    """
    The field ū_θ a network stands for.

    Networks tagged ``dirichlet_product`` get the boundary operator, others
    only their shift. Any other callable (e.g. an exact solution used in its
    place) is returned unchanged.
    """
    if not isinstance(net, DenseNetwork):
        return net
    if net.boundary_mode == BOUNDARY_DIRICHLET_PRODUCT:
        return apply_boundary_operator(net, problem)
    if net.shift:
        return ShiftedNetwork(net)
    return net
