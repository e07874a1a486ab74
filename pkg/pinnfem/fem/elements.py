"""Reference Lagrange and Hermite elements."""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import NamedTuple, Optional, Tuple

import numpy as np

from pinnfem.errors import CapabilityError, InputError
from pinnfem.fem.quadrature import CELL_TYPES

LAGRANGE = "lagrange"
HERMITE = "hermite"

SUPPORTED = {
    (LAGRANGE, 1): (1, 2, 3),
    (LAGRANGE, 2): (1, 2),
    (LAGRANGE, 3): (1,),
    (HERMITE, 1): (3,),
}

VERTEX = "vertex"
VERTEX_DERIVATIVE = "vertex_derivative"
EDGE = "edge"
INTERIOR = "interior"

LOCAL_EDGES = ((0, 1), (1, 2), (0, 2))
"""Local vertex pairs of triangle edges, in DoF order."""

REFERENCE_TOLERANCE = 1e-12


class DofDescriptor(NamedTuple):
    kind: str
    entity: int
    """Local vertex, edge or interior index."""
    point: Tuple[float, ...]
    """Reference position of the degree of freedom."""


class BasisTabulation(NamedTuple):
    """Local basis functions on the reference cell."""

    values: np.ndarray
    """Shape ``(P, nb)``."""
    gradients: Optional[np.ndarray] = None
    """Shape ``(P, nb, dim)``."""
    hessians: Optional[np.ndarray] = None
    """Shape ``(P, nb, dim, dim)``."""


@dataclass(frozen=True)
class ElementFamily:
    """
    A finite element on the reference simplex.

    Lagrange elements of degree 1-3 in 1D, 1-2 in 2D and 1 in 3D, and the
    cubic Hermite element in 1D.
    """

    family: str
    degree: int
    dim: int

    def __post_init__(self):
        allowed = SUPPORTED.get((self.family, self.dim))
        if allowed is None or self.degree not in allowed:
            raise CapabilityError(
                f"{self.family} elements of degree {self.degree} are not available in {self.dim}D"
            )

    @property
    def cell_type(self) -> str:
        return CELL_TYPES[self.dim]

    @property
    def is_hermite(self) -> bool:
        return self.family == HERMITE

    @property
    def descriptors(self) -> Tuple[DofDescriptor, ...]:
        return _descriptors(self)

    @property
    def dofs_per_cell(self) -> int:
        return len(self.descriptors)

    def __str__(self) -> str:
        if self.is_hermite:
            return "H3"
        return f"P{self.degree}"


@lru_cache(maxsize=None)
def _descriptors(element: ElementFamily) -> Tuple[DofDescriptor, ...]:
    if element.is_hermite:
        return (
            DofDescriptor(VERTEX, 0, (0.0,)),
            DofDescriptor(VERTEX_DERIVATIVE, 0, (0.0,)),
            DofDescriptor(VERTEX, 1, (1.0,)),
            DofDescriptor(VERTEX_DERIVATIVE, 1, (1.0,)),
        )
    corners = np.vstack([np.zeros(element.dim), np.eye(element.dim)])
    vertices = [tuple(float(v) for v in row) for row in corners]
    dofs = [DofDescriptor(VERTEX, index, point) for index, point in enumerate(vertices)]
    if element.dim == 1:
        dofs += [
            DofDescriptor(INTERIOR, j - 1, (j / element.degree,))
            for j in range(1, element.degree)
        ]
    elif element.degree == 2:
        for index, (a, b) in enumerate(LOCAL_EDGES):
            midpoint = tuple(0.5 * (p + q) for p, q in zip(vertices[a], vertices[b]))
            dofs.append(DofDescriptor(EDGE, index, midpoint))
    return tuple(dofs)


def _exponents(dim: int, degree: int) -> np.ndarray:
    return np.array(
        [powers for powers in product(range(degree + 1), repeat=dim) if sum(powers) <= degree]
    )


def _power_factors(points: np.ndarray, exponents: np.ndarray, order: int) -> np.ndarray:
    """``order``-th derivative of x_i**e_i per point, monomial and axis."""
    coefficient = np.ones(exponents.shape)
    for step in range(order):
        coefficient = coefficient * (exponents - step)
    reduced = exponents - order
    valid = reduced >= 0
    powers = points[:, None, :] ** np.where(valid, reduced, 0)[None, :, :]
    return np.where(valid[None], coefficient[None] * powers, 0.0)


def monomials(points: np.ndarray, exponents: np.ndarray, order: int) -> BasisTabulation:
    """Monomials x^e and their derivatives at ``points``."""
    dim = points.shape[1]
    factors = [_power_factors(points, exponents, k) for k in range(min(order, 2) + 1)]

    def product_of(choice):
        result = np.ones(factors[0].shape[:2])
        for axis, k in enumerate(choice):
            result = result * factors[k][:, :, axis]
        return result

    values = product_of([0] * dim)
    gradients = hessians = None
    if order >= 1:
        gradients = np.stack(
            [product_of([1 if a == j else 0 for a in range(dim)]) for j in range(dim)], axis=-1
        )
    if order >= 2:
        hessians = np.empty(values.shape + (dim, dim))
        for j in range(dim):
            for k in range(dim):
                choice = [0] * dim
                choice[j] += 1
                choice[k] += 1
                hessians[:, :, j, k] = product_of(choice)
    return BasisTabulation(values, gradients, hessians)


@lru_cache(maxsize=None)
def _lagrange_coefficients(element: ElementFamily) -> Tuple[np.ndarray, np.ndarray]:
    exponents = _exponents(element.dim, element.degree)
    nodes = np.array([dof.point for dof in element.descriptors])
    vandermonde = monomials(nodes, exponents, 0).values
    return exponents, np.linalg.inv(vandermonde)


def _hermite_basis(points: np.ndarray, order: int) -> BasisTabulation:
    t = points[:, 0]
    values = np.column_stack(
        [1 - 3 * t**2 + 2 * t**3, t - 2 * t**2 + t**3, 3 * t**2 - 2 * t**3, -(t**2) + t**3]
    )
    gradients = hessians = None
    if order >= 1:
        gradients = np.column_stack(
            [-6 * t + 6 * t**2, 1 - 4 * t + 3 * t**2, 6 * t - 6 * t**2, -2 * t + 3 * t**2]
        )[:, :, None]
    if order >= 2:
        hessians = np.column_stack(
            [-6 + 12 * t, -4 + 6 * t, 6 - 12 * t, -2 + 6 * t]
        )[:, :, None, None]
    return BasisTabulation(values, gradients, hessians)


def check_reference_points(element: ElementFamily, points: np.ndarray) -> None:
    if points.ndim != 2 or points.shape[1] != element.dim:
        raise InputError(
            f"reference points must have shape (P, {element.dim}), got {points.shape}"
        )
    outside = (points < -REFERENCE_TOLERANCE).any(axis=1) | (
        points.sum(axis=1) > 1 + REFERENCE_TOLERANCE
    )
    if outside.any():
        raise InputError(f"point {points[outside][0].tolist()} is outside the reference cell")


def reference_basis(element: ElementFamily, points, order: int = 0) -> BasisTabulation:
    """
    Local basis functions and their derivatives on the reference cell.

    :param element: The element.
    :param points: Reference points, shape ``(P, dim)``.
    :param order: Highest derivative order, at most 2.
    """
    if not 0 <= order <= 2:
        raise CapabilityError(f"basis derivatives of order {order} are not available")
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    check_reference_points(element, points)
    if element.is_hermite:
        return _hermite_basis(points, order)
    exponents, coefficients = _lagrange_coefficients(element)
    raw = monomials(points, exponents, order)
    return BasisTabulation(
        raw.values @ coefficients,
        None if raw.gradients is None else np.einsum("pmj,mn->pnj", raw.gradients, coefficients),
        None if raw.hessians is None else np.einsum("pmjk,mn->pnjk", raw.hessians, coefficients),
    )
