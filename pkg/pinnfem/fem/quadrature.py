"""Gauss rules on the reference interval, triangle and tetrahedron."""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from pinnfem.errors import CapabilityError, InputError

INTERVAL = "interval"
TRIANGLE = "triangle"
TETRAHEDRON = "tetrahedron"
CELL_TYPES = {1: INTERVAL, 2: TRIANGLE, 3: TETRAHEDRON}

MAX_DEGREE = {INTERVAL: 41, TRIANGLE: 25, TETRAHEDRON: 19}
REFERENCE_MEASURE = {INTERVAL: 1.0, TRIANGLE: 0.5, TETRAHEDRON: 1.0 / 6.0}


@dataclass(frozen=True)
class QuadratureRule:
    """Points and positive weights on a reference cell."""

    cell_type: str
    points: np.ndarray
    """Shape ``(Q, dim)``."""
    weights: np.ndarray
    exactness_degree: int
    """All polynomials of at most this total degree are integrated exactly."""

    @property
    def size(self) -> int:
        return self.weights.shape[0]


def gauss_jacobi(n: int, alpha: float):
    """n-point rule for ∫₀¹ g(u)(1−u)^alpha du."""
    roots, weights = roots_jacobi(n, alpha, 0.0)
    return 0.5 * (roots + 1.0), weights / 2.0 ** (alpha + 1.0)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.ascontiguousarray(array, dtype=np.float64)
    array.setflags(write=False)
    return array


@lru_cache(maxsize=None)
def quadrature_for(cell_type: str, degree: int) -> QuadratureRule:
    """
    Gauss rule of the given exactness on a reference cell.

    Simplices use collapsed (Duffy) products of Gauss-Jacobi and
    Gauss-Legendre rules with ``degree // 2 + 1`` points per direction.
    """
    if cell_type not in MAX_DEGREE:
        raise InputError(f"unknown cell type '{cell_type}'")
    if degree < 0:
        raise InputError(f"quadrature degree must be non-negative, got {degree}")
    if degree > MAX_DEGREE[cell_type]:
        raise CapabilityError(
            f"no {cell_type} rule of degree {degree} (maximum {MAX_DEGREE[cell_type]})"
        )
    n = degree // 2 + 1
    u, wu = gauss_jacobi(n, 0.0)
    if cell_type == INTERVAL:
        points, weights = u.reshape(-1, 1), wu
    elif cell_type == TRIANGLE:
        a, wa = gauss_jacobi(n, 1.0)
        aa, uu = np.meshgrid(a, u, indexing="ij")
        points = np.column_stack([aa.ravel(), ((1 - aa) * uu).ravel()])
        weights = np.outer(wa, wu).ravel()
    else:
        a, wa = gauss_jacobi(n, 2.0)
        b, wb = gauss_jacobi(n, 1.0)
        aa, bb, uu = np.meshgrid(a, b, u, indexing="ij")
        points = np.column_stack(
            [
                aa.ravel(),
                ((1 - aa) * bb).ravel(),
                ((1 - aa) * (1 - bb) * uu).ravel(),
            ]
        )
        weights = np.einsum("i,j,k->ijk", wa, wb, wu).ravel()
    return QuadratureRule(cell_type, _frozen(points), _frozen(weights), 2 * n - 1)
