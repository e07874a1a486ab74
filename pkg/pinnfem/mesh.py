"""Structured simplicial meshes of the unit interval, square and cube."""

import itertools
from dataclasses import dataclass
from typing import NamedTuple, Tuple

import numpy as np

from pinnfem.errors import InputError, MeshError

PERMUTATIONS: Tuple[Tuple[int, ...], ...] = tuple(itertools.permutations(range(3)))
"""Axis orderings of the six tetrahedra of a cube, in cell order."""

LOCAL_FACETS = {
    1: ((0,), (1,)),
    2: ((0, 1), (1, 2), (0, 2)),
    3: ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)),
}


class BoundaryClassification(NamedTuple):
    """Boundary entities of a mesh."""

    nodes: np.ndarray
    """Sorted indices of the nodes on the boundary."""
    facets: np.ndarray
    """Boundary facets as sorted node tuples, shape ``(F, dim)``."""


class CellGeometry(NamedTuple):
    """Affine maps x = origin + J·x̂ of a batch of cells."""

    origin: np.ndarray
    jacobian: np.ndarray
    inverse: np.ndarray
    determinant: np.ndarray


@dataclass(frozen=True)
class Mesh:
    """
    Simplicial mesh of [0,1]^dim on a uniform grid of ``divisions`` per axis.

    Node coordinates are kept as integer grid indices so boundary tests are
    exact; ``nodes`` is ``grid / divisions``.
    """

    dim: int
    divisions: int
    grid: np.ndarray
    """Integer grid coordinates of the nodes, shape ``(N, dim)``."""
    cells: np.ndarray
    """Node indices of each cell, shape ``(C, dim + 1)``, positively oriented."""
    boundary_nodes: np.ndarray
    boundary_facets: np.ndarray

    @property
    def nodes(self) -> np.ndarray:
        return self.grid / self.divisions

    @property
    def h(self) -> float:
        return 1.0 / self.divisions

    @property
    def n_nodes(self) -> int:
        return self.grid.shape[0]

    @property
    def n_cells(self) -> int:
        return self.cells.shape[0]

    def geometry(self, cells=None) -> CellGeometry:
        """Affine maps of ``cells`` (all cells by default)."""
        cells = np.arange(self.n_cells) if cells is None else np.asarray(cells)
        vertices = self.nodes[self.cells[cells]]
        origin = vertices[:, 0, :]
        jacobian = np.transpose(vertices[:, 1:, :] - origin[:, None, :], (0, 2, 1))
        determinant = np.linalg.det(jacobian)
        if np.any(determinant <= 0):
            bad = cells[np.flatnonzero(determinant <= 0)[0]]
            raise MeshError(f"cell {bad} has non-positive measure")
        return CellGeometry(origin, jacobian, np.linalg.inv(jacobian), determinant)

    def cell_measures(self) -> np.ndarray:
        factorial = np.prod(np.arange(1, self.dim + 1))
        return self.geometry().determinant / factorial

    def facet_incidence(self) -> Tuple[np.ndarray, np.ndarray]:
        """Every facet (sorted node tuple) and the number of cells sharing it."""
        local = np.array(LOCAL_FACETS[self.dim])
        facets = np.sort(self.cells[:, local].reshape(-1, self.dim), axis=1)
        return np.unique(facets, axis=0, return_counts=True)

    def locate(self, points) -> Tuple[np.ndarray, np.ndarray]:
        """
        Containing cell and reference coordinates of each point.

        :param points: Array of shape ``(N, dim)`` inside the closed unit box.
        :raises InputError: when a point lies outside the box.
        """
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        if points.shape[1] != self.dim:
            raise InputError(
                f"expected points of dimension {self.dim}, got {points.shape[1]}"
            )
        if np.any(points < 0) or np.any(points > 1):
            raise InputError("point outside the unit box")
        scaled = points * self.divisions
        index = np.minimum(np.floor(scaled).astype(np.int64), self.divisions - 1)
        frac = scaled - index
        m = self.divisions
        if self.dim == 1:
            cells = index[:, 0]
        elif self.dim == 2:
            square = index[:, 1] * m + index[:, 0]
            cells = 2 * square + (frac[:, 0] < frac[:, 1])
        else:
            cube = (index[:, 2] * m + index[:, 1]) * m + index[:, 0]
            order = np.argsort(-frac, axis=1, kind="stable")
            code = order[:, 0] * 9 + order[:, 1] * 3 + order[:, 2]
            cells = 6 * cube + _PERMUTATION_LOOKUP[code]
        geometry = self.geometry(cells)
        reference = np.einsum("nij,nj->ni", geometry.inverse, points - geometry.origin)
        return cells, np.clip(reference, 0.0, 1.0)


_PERMUTATION_LOOKUP = np.zeros(27, dtype=np.int64)
for _index, _perm in enumerate(PERMUTATIONS):
    _PERMUTATION_LOOKUP[_perm[0] * 9 + _perm[1] * 3 + _perm[2]] = _index


def classify_boundary(mesh: Mesh) -> BoundaryClassification:
    """Boundary nodes and facets, from integer coordinates."""
    return _classify(mesh.dim, mesh.divisions, mesh.grid, mesh.cells)


def _classify(dim, divisions, grid, cells) -> BoundaryClassification:
    on_boundary = np.any((grid == 0) | (grid == divisions), axis=1)
    nodes = np.flatnonzero(on_boundary)
    local = np.array(LOCAL_FACETS[dim])
    facets = np.unique(np.sort(cells[:, local].reshape(-1, dim), axis=1), axis=0)
    coordinates = grid[facets]
    on_face = np.zeros(facets.shape[0], dtype=bool)
    for axis in range(dim):
        column = coordinates[:, :, axis]
        for side in (0, divisions):
            on_face |= np.all(column == side, axis=1)
    return BoundaryClassification(nodes, facets[on_face])


def _build(dim: int, divisions: int, grid: np.ndarray, cells: np.ndarray) -> Mesh:
    boundary = _classify(dim, divisions, grid, cells)
    return Mesh(dim, divisions, grid, cells, boundary.nodes, boundary.facets)


def _check_divisions(divisions: int) -> None:
    if divisions < 1:
        raise InputError(f"a mesh needs at least one division, got {divisions}")


def interval_mesh(n: int) -> Mesh:
    """n equal cells on [0,1]."""
    _check_divisions(n)
    grid = np.arange(n + 1).reshape(-1, 1)
    cells = np.column_stack([np.arange(n), np.arange(1, n + 1)])
    return _build(1, n, grid, cells)


def triangle_mesh(m: int) -> Mesh:
    """
    m x m squares, each split along its (0,0)-(1,1) diagonal.

    Square (i, j) holds cells ``2(jm+i)`` (below the diagonal) and
    ``2(jm+i)+1`` (above it).
    """
    _check_divisions(m)
    jj, ii = np.meshgrid(np.arange(m + 1), np.arange(m + 1), indexing="ij")
    grid = np.column_stack([ii.ravel(), jj.ravel()])

    jj, ii = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    i, j = ii.ravel(), jj.ravel()
    v00 = j * (m + 1) + i
    v10 = v00 + 1
    v01 = v00 + m + 1
    v11 = v01 + 1
    cells = np.stack(
        [np.column_stack([v00, v10, v11]), np.column_stack([v00, v11, v01])], axis=1
    ).reshape(-1, 3)
    return _build(2, m, grid, cells)


def tet_mesh(m: int) -> Mesh:
    """
    m x m x m cubes, each split into the six Kuhn tetrahedra.

    Tetrahedron p of a cube walks from its lowest to its highest corner along
    the axes ``PERMUTATIONS[p]``; odd orderings swap the last two vertices so
    every cell is positively oriented.
    """
    _check_divisions(m)
    n = m + 1
    kk, jj, ii = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    grid = np.column_stack([ii.ravel(), jj.ravel(), kk.ravel()])

    kk, jj, ii = np.meshgrid(np.arange(m), np.arange(m), np.arange(m), indexing="ij")
    corner = np.column_stack([ii.ravel(), jj.ravel(), kk.ravel()])
    strides = np.array([1, n, n * n])
    base = corner @ strides
    unit = np.eye(3, dtype=np.int64)

    tetrahedra = []
    for perm in PERMUTATIONS:
        offsets = [
            np.zeros(3, dtype=np.int64),
            unit[perm[0]],
            unit[perm[0]] + unit[perm[1]],
            np.ones(3, dtype=np.int64),
        ]
        if _is_odd(perm):
            offsets[2], offsets[3] = offsets[3], offsets[2]
        tetrahedra.append(np.column_stack([base + offset @ strides for offset in offsets]))
    cells = np.stack(tetrahedra, axis=1).reshape(-1, 4)
    return _build(3, m, grid, cells)


def _is_odd(perm) -> bool:
    inversions = sum(
        1 for a, b in itertools.combinations(range(len(perm)), 2) if perm[a] > perm[b]
    )
    return inversions % 2 == 1


def structured_mesh(dim: int, divisions: int) -> Mesh:
    """The mesh of [0,1]^dim with ``divisions`` cells per axis."""
    builders = {1: interval_mesh, 2: triangle_mesh, 3: tet_mesh}
    if dim not in builders:
        raise InputError(f"mesh dimension must be 1, 2 or 3, got {dim}")
    return builders[dim](divisions)


def dump_mesh(mesh: Mesh, path: str) -> None:
    """Write ``NODES k`` and ``CELLS c`` blocks to a text file."""
    with open(path, "w", encoding="utf-8", newline="\n") as out_file:
        out_file.write(f"NODES {mesh.n_nodes}\n")
        for node in mesh.nodes:
            out_file.write(" ".join(repr(float(value)) for value in node) + "\n")
        out_file.write(f"CELLS {mesh.n_cells}\n")
        for cell in mesh.cells:
            out_file.write(" ".join(str(int(index)) for index in cell) + "\n")
