"""Finite element spaces: DoF numbering, tabulation on cells, evaluation."""

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional

import numpy as np

from pinnfem.errors import InputError
from pinnfem.fem.elements import LOCAL_EDGES, ElementFamily, reference_basis
from pinnfem.fem.quadrature import quadrature_for
from pinnfem.mesh import Mesh
from pinnfem.network.jets import Field, JetValue

CLASSICAL = "classical"
ADDITIVE = "additive"
MULTIPLICATIVE = "multiplicative"
ENRICHMENTS = (CLASSICAL, ADDITIVE, MULTIPLICATIVE)

CHUNK_POINTS = 400_000
"""Upper bound on cells x quadrature points tabulated at once."""


class DofLayout(NamedTuple):
    dof_map: np.ndarray
    """Global DoF of each local DoF, shape ``(C, nb)``."""
    n_dofs: int
    coordinates: np.ndarray
    """Physical position of each DoF, shape ``(n_dofs, dim)``."""
    slope_dofs: np.ndarray
    """True for Hermite derivative DoFs."""
    boundary_dofs: np.ndarray


class FEValue(NamedTuple):
    value: np.ndarray
    gradient: Optional[np.ndarray] = None
    hessian: Optional[np.ndarray] = None


@dataclass
class CellTabulation:
    """Basis functions of a space at points of a batch of cells, in physical coordinates."""

    cells: np.ndarray
    points: np.ndarray
    """Shape ``(C, Q, dim)``."""
    values: np.ndarray
    """Shape ``(C, Q, nb)``."""
    gradients: Optional[np.ndarray]
    hessians: Optional[np.ndarray]
    order: int
    weights: Optional[np.ndarray] = None
    """Quadrature weights times the cell Jacobian, shape ``(C, Q)``."""
    surrogate: Optional[JetValue] = None
    """Jets of the enrichment function at ``points``, when the space has one."""


def build_dof_layout(mesh: Mesh, element: ElementFamily) -> DofLayout:
    """Global numbering: mesh nodes first, then edge and cell-interior DoFs."""
    cells = mesh.cells
    n_nodes = mesh.n_nodes
    nodes = mesh.nodes
    if element.is_hermite:
        dof_map = np.column_stack(
            [2 * cells[:, 0], 2 * cells[:, 0] + 1, 2 * cells[:, 1], 2 * cells[:, 1] + 1]
        )
        slope = np.tile([False, True], n_nodes)
        ends = 2 * mesh.boundary_nodes
        boundary = np.sort(np.concatenate([ends, ends + 1]))
        return DofLayout(dof_map, 2 * n_nodes, np.repeat(nodes, 2, axis=0), slope, boundary)

    if element.dim == 1 and element.degree > 1:
        inner = element.degree - 1
        interior = n_nodes + np.arange(mesh.n_cells)[:, None] * inner + np.arange(inner)
        dof_map = np.hstack([cells, interior])
        offsets = np.arange(1, element.degree) / element.degree * mesh.h
        positions = (nodes[cells[:, 0], 0][:, None] + offsets).reshape(-1, 1)
        coordinates = np.vstack([nodes, positions])
        boundary = mesh.boundary_nodes
    elif element.dim == 2 and element.degree == 2:
        pairs = np.sort(cells[:, list(LOCAL_EDGES)].reshape(-1, 2), axis=1)
        edges, inverse = np.unique(pairs, axis=0, return_inverse=True)
        dof_map = np.hstack([cells, n_nodes + inverse.reshape(mesh.n_cells, 3)])
        coordinates = np.vstack([nodes, nodes[edges].mean(axis=1)])
        ends = mesh.grid[edges]
        on_face = np.zeros(edges.shape[0], dtype=bool)
        for axis in range(mesh.dim):
            first, second = ends[:, 0, axis], ends[:, 1, axis]
            on_face |= (first == second) & ((first == 0) | (first == mesh.divisions))
        boundary = np.concatenate([mesh.boundary_nodes, n_nodes + np.flatnonzero(on_face)])
    else:
        dof_map = cells
        coordinates = nodes
        boundary = mesh.boundary_nodes
    n_dofs = coordinates.shape[0]
    return DofLayout(dof_map, n_dofs, coordinates, np.zeros(n_dofs, dtype=bool), boundary)


class FunctionSpace:
    """
    A Lagrange or Hermite space on a mesh, optionally enriched by a network.

    ``network`` is the enrichment function ū_θ (the boundary-operated network
    or any field standing in for it). The additive space is V_h + ū_θ, the
    multiplicative one V_h·(ū_θ + shift).
    """

    mesh: Mesh
    element: ElementFamily
    enrichment: str
    network: Optional[Field]
    shift: float

    def __init__(
        self,
        mesh: Mesh,
        element: ElementFamily,
        enrichment: str = CLASSICAL,
        network: Optional[Field] = None,
        shift: float = 0.0,
        layout: Optional[DofLayout] = None,
    ):
        if element.dim != mesh.dim:
            raise InputError(f"a {element.dim}D element cannot live on a {mesh.dim}D mesh")
        if enrichment not in ENRICHMENTS:
            raise InputError(f"unknown enrichment '{enrichment}'")
        if enrichment != CLASSICAL and network is None:
            raise InputError(f"the {enrichment} space needs a network")
        self.mesh = mesh
        self.element = element
        self.enrichment = enrichment
        self.network = network
        self.shift = float(shift)
        self.layout = layout or build_dof_layout(mesh, element)
        self._kernel = None

    @property
    def dof_map(self) -> np.ndarray:
        return self.layout.dof_map

    @property
    def n_dofs(self) -> int:
        return self.layout.n_dofs

    @property
    def dof_coordinates(self) -> np.ndarray:
        return self.layout.coordinates

    @property
    def slope_dofs(self) -> np.ndarray:
        return self.layout.slope_dofs

    @property
    def boundary_dofs(self) -> np.ndarray:
        return self.layout.boundary_dofs

    def enriched(self, enrichment: str, network: Field, shift: float = 0.0) -> "FunctionSpace":
        """The same base space with another enrichment; the DoF layout is shared."""
        return FunctionSpace(self.mesh, self.element, enrichment, network, shift, self.layout)

    def classical(self) -> "FunctionSpace":
        if self.enrichment == CLASSICAL:
            return self
        return FunctionSpace(self.mesh, self.element, layout=self.layout)

    @property
    def kernel(self):
        """Per-cell transformation of the basis for the enrichment mode."""
        if self._kernel is None:
            if self.enrichment == CLASSICAL:
                from pinnfem.fem.kernels import ClassicalKernel

                self._kernel = ClassicalKernel(self)
            else:
                from pinnfem.enrichment.kernels import kernel_for

                self._kernel = kernel_for(self)
        return self._kernel

    def tabulate_basis(
        self,
        cells: np.ndarray,
        reference_points: np.ndarray,
        order: int,
        reference_weights: Optional[np.ndarray] = None,
    ) -> CellTabulation:
        """
        Classical basis functions mapped to the given cells.

        :param reference_points: ``(Q, dim)`` shared by all cells, or
            ``(C, Q, dim)`` per cell.
        """
        cells = np.asarray(cells)
        geometry = self.mesh.geometry(cells)
        reference_points = np.asarray(reference_points, dtype=np.float64)
        shared = reference_points.ndim == 2
        if shared:
            basis = reference_basis(self.element, reference_points, order)
            points = geometry.origin[:, None, :] + np.einsum(
                "cij,qj->cqi", geometry.jacobian, reference_points
            )
            values = np.broadcast_to(basis.values, (len(cells),) + basis.values.shape)
            gradient_rule, hessian_rule = "cji,qnj->cqni", "cji,qnjl,clk->cqnik"
        else:
            n_cells, n_points, dim = reference_points.shape
            flat = reference_basis(self.element, reference_points.reshape(-1, dim), order)
            basis = type(flat)(
                *(
                    None if item is None else item.reshape((n_cells, n_points) + item.shape[1:])
                    for item in flat
                )
            )
            points = geometry.origin[:, None, :] + np.einsum(
                "cij,cqj->cqi", geometry.jacobian, reference_points
            )
            values = basis.values
            gradient_rule, hessian_rule = "cji,cqnj->cqni", "cji,cqnjl,clk->cqnik"

        gradients = hessians = None
        if order >= 1:
            gradients = np.einsum(gradient_rule, geometry.inverse, basis.gradients)
        if order >= 2:
            hessians = np.einsum(hessian_rule, geometry.inverse, basis.hessians, geometry.inverse)

        if self.element.is_hermite:
            scale = np.ones((len(cells), self.element.dofs_per_cell))
            scale[:, 1::2] = geometry.jacobian[:, 0, 0][:, None]
            values = values * scale[:, None, :]
            if gradients is not None:
                gradients = gradients * scale[:, None, :, None]
            if hessians is not None:
                hessians = hessians * scale[:, None, :, None, None]

        weights = None
        if reference_weights is not None:
            weights = np.asarray(reference_weights)[None, :] * np.abs(geometry.determinant)[:, None]
        return CellTabulation(
            cells, points, np.asarray(values), gradients, hessians, order, weights
        )

    def tabulate(
        self,
        cells: np.ndarray,
        reference_points: np.ndarray,
        order: int,
        reference_weights: Optional[np.ndarray] = None,
    ) -> CellTabulation:
        """Basis functions of this space (enrichment transform included)."""
        return self.kernel.transform(
            self.tabulate_basis(cells, reference_points, order, reference_weights)
        )

    def quadrature_tabulations(self, degree: int, order: int) -> Iterator[CellTabulation]:
        """Tabulations at the quadrature points of every cell, in chunks of cells."""
        rule = quadrature_for(self.element.cell_type, degree)
        chunk = max(1, CHUNK_POINTS // rule.size)
        for start in range(0, self.mesh.n_cells, chunk):
            cells = np.arange(start, min(start + chunk, self.mesh.n_cells))
            yield self.tabulate(cells, rule.points, order, rule.weights)

    def __repr__(self) -> str:
        return (
            f"FunctionSpace({self.enrichment}, {self.element}, dim={self.mesh.dim}, "
            f"divisions={self.mesh.divisions}, n_dofs={self.n_dofs})"
        )


def evaluate_fe(space: FunctionSpace, dofs: np.ndarray, points, order: int = 0) -> FEValue:
    """
    Σ u_j ψ_j at ``points`` (shape ``(N, dim)``), with ψ_j the basis of ``space``.

    :raises InputError: when a point lies outside the unit box.
    """
    dofs = np.asarray(dofs, dtype=np.float64)
    if dofs.shape != (space.n_dofs,):
        raise InputError(f"expected {space.n_dofs} DoF values, got shape {dofs.shape}")
    cells, reference = space.mesh.locate(points)
    tab = space.tabulate(cells, reference[:, None, :], order)
    member = space.kernel.member(tab, dofs[space.dof_map[cells]])
    return FEValue(*(None if item is None else item[:, 0] for item in member))


@dataclass
class FESolution:
    """DoF vector of a solved space; ``offset`` is subtracted on evaluation."""

    space: FunctionSpace
    dofs: np.ndarray
    solve_info: Optional[object] = None
    offset: float = 0.0

    def evaluate(self, points, order: int = 0) -> FEValue:
        value = evaluate_fe(self.space, self.dofs, points, order)
        if self.offset:
            value = value._replace(value=value.value - self.offset)
        return value
