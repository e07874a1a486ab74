"""Uniform collocation grids on the unit box."""

from dataclasses import dataclass

import numpy as np
import torch

from pinnfem.errors import InputError


@dataclass(frozen=True)
class CollocationSet:
    """Interior and boundary sample points with their quadrature weights."""

    interior_points: np.ndarray
    """Cell-centered grid, shape ``(m**dim, dim)``, strictly inside the box."""
    boundary_points: np.ndarray
    """Per-face centered grids, shape ``(2 * dim * m**(dim - 1), dim)``."""
    interior_weight: float
    boundary_weight: float
    resolution: int
    """Points per axis, m."""

    @property
    def dim(self) -> int:
        return self.interior_points.shape[1]

    def interior_tensor(self) -> torch.Tensor:
        return torch.from_numpy(self.interior_points)

    def boundary_tensor(self) -> torch.Tensor:
        return torch.from_numpy(self.boundary_points)


def grid_resolution(dim: int, count: int) -> int:
    """Largest m with m**dim <= count."""
    resolution = max(1, int(round(count ** (1.0 / dim))))
    while resolution**dim > count:
        resolution -= 1
    while (resolution + 1) ** dim <= count:
        resolution += 1
    return resolution


def _centered_grid(dim: int, resolution: int) -> np.ndarray:
    centers = (np.arange(resolution) + 0.5) / resolution
    axes = np.meshgrid(*([centers] * dim), indexing="ij")
    return np.column_stack([axis.ravel() for axis in axes])


def make_collocation(dim: int, count: int) -> CollocationSet:
    """
    Cell-centered collocation grid with about ``count`` interior points.

    ``count`` is rounded down to the nearest m**dim. Each face of the box
    carries its own centered grid of the same resolution.
    """
    if dim not in (1, 2, 3):
        raise InputError(f"collocation dimension must be 1, 2 or 3, got {dim}")
    if count < 2**dim:
        raise InputError(
            f"at least {2**dim} collocation points are needed in {dim}D, got {count}"
        )
    resolution = grid_resolution(dim, count)
    interior = _centered_grid(dim, resolution)

    if dim == 1:
        boundary = np.array([[0.0], [1.0]])
    else:
        face_grid = _centered_grid(dim - 1, resolution)
        faces = []
        for axis in range(dim):
            for side in (0.0, 1.0):
                face = np.insert(face_grid, axis, side, axis=1)
                faces.append(face)
        boundary = np.concatenate(faces)

    return CollocationSet(
        interior_points=interior,
        boundary_points=boundary,
        interior_weight=1.0 / interior.shape[0],
        boundary_weight=1.0 / boundary.shape[0],
        resolution=resolution,
    )
