"""Convergence studies over sequences of uniformly refined meshes."""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from pinnfem.analysis.norms import ErrorTriple, error_norms
from pinnfem.enrichment.shift import DEFAULT_MARGIN, DEFAULT_RESOLUTION
from pinnfem.enrichment.solvers import solve_additive, solve_multiplicative
from pinnfem.errors import InputError, PinnFemError
from pinnfem.fem.elements import ElementFamily
from pinnfem.fem.solver import AUTO, solve_classical
from pinnfem.fem.space import ADDITIVE, CLASSICAL, ENRICHMENTS, FESolution, FunctionSpace
from pinnfem.logger import logger
from pinnfem.mesh import structured_mesh
from pinnfem.pinn.checkpoint import load_checkpoint
from pinnfem.pinn.losses import pinn_l2_error
from pinnfem.pinn.problems import ProblemSpec

NORMS = ("l2", "h1", "h1_semi", "h2")

STATUS_OK = "ok"


@dataclass(frozen=True)
class SpaceConfig:
    """Which space a study solves in."""

    space: str = CLASSICAL
    element: str = "lagrange"
    degree: int = 1
    quadrature_degree: Optional[int] = None
    solver: str = AUTO
    shift_margin: float = DEFAULT_MARGIN
    sample_resolution: int = DEFAULT_RESOLUTION

    def __post_init__(self):
        if self.space not in ENRICHMENTS:
            raise InputError(f"unknown space '{self.space}'")

    @property
    def label(self) -> str:
        prefix = "H" if self.element == "hermite" else "P"
        return f"{self.space}_{prefix}{self.degree}"


@dataclass
class ConvergenceRow:
    mesh_size: int
    """Cells per axis."""
    dim: int
    errors: Optional[ErrorTriple] = None
    orders: Dict[str, Optional[float]] = field(default_factory=dict)
    status: str = STATUS_OK
    residual: Optional[float] = None
    condition_estimate: Optional[float] = None
    shift: Optional[float] = None

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK

    @property
    def mesh_parameter(self) -> float:
        """n in 1D, h = 1/m otherwise."""
        return float(self.mesh_size) if self.dim == 1 else 1.0 / self.mesh_size

    def error(self, norm: str) -> Optional[float]:
        if self.errors is None:
            return None
        return getattr(self.errors, norm)


@dataclass
class ConvergenceReport:
    problem_id: str
    space: SpaceConfig
    rows: List[ConvergenceRow]
    seed: Optional[int] = None
    pinn: Dict[str, float] = field(default_factory=dict)
    """Training metadata and the L2 error of the network itself."""

    @property
    def ok(self) -> bool:
        return all(row.ok for row in self.rows)

    @property
    def has_h2(self) -> bool:
        return any(row.errors is not None and row.errors.h2 is not None for row in self.rows)

    def fitted_order(self, norm: str = "l2") -> Optional[float]:
        """Order between the last two rows."""
        if len(self.rows) < 2:
            return None
        return self.rows[-1].orders.get(norm)

    def column(self, norm: str) -> List[Optional[float]]:
        return [row.error(norm) for row in self.rows]


def order_between(e_coarse: float, e_fine: float) -> Optional[float]:
    """log2(e_coarse / e_fine); None when either error is not positive."""
    if not (e_coarse > 0 and e_fine > 0):
        return None
    if not (math.isfinite(e_coarse) and math.isfinite(e_fine)):
        return None
    return math.log2(e_coarse / e_fine)


def check_mesh_sizes(mesh_sizes: Sequence[int]) -> List[int]:
    sizes = [int(size) for size in mesh_sizes]
    if not sizes:
        raise InputError("a study needs at least one mesh size")
    if sizes[0] < 1:
        raise InputError(f"mesh sizes must be positive, got {sizes[0]}")
    for coarse, fine in zip(sizes[:-1], sizes[1:]):
        if fine != 2 * coarse:
            raise InputError(f"mesh sizes must double, got {coarse} then {fine}")
    return sizes


def solve_in_space(
    problem: ProblemSpec, config: SpaceConfig, mesh_size: int, net=None
) -> FESolution:
    """Solve ``problem`` on the mesh with ``mesh_size`` cells per axis."""
    mesh = structured_mesh(problem.dim, mesh_size)
    base = FunctionSpace(mesh, ElementFamily(config.element, config.degree, problem.dim))
    if config.space == CLASSICAL:
        return solve_classical(problem, base, config.quadrature_degree, config.solver)
    if config.space == ADDITIVE:
        return solve_additive(problem, base, net, config.quadrature_degree, config.solver)
    return solve_multiplicative(
        problem,
        base,
        net,
        margin=config.shift_margin,
        resolution=config.sample_resolution,
        quadrature_degree=config.quadrature_degree,
        method=config.solver,
    )


def _run_row(problem: ProblemSpec, config: SpaceConfig, mesh_size: int, net) -> ConvergenceRow:
    row = ConvergenceRow(mesh_size=mesh_size, dim=problem.dim)
    try:
        solution = solve_in_space(problem, config, mesh_size, net)
        row.errors = error_norms(solution, problem)
    except PinnFemError as err:
        row.status = f"failed: {err}"
        logger.warning("%s %s, mesh size %d failed: %s", problem.id, config.label, mesh_size, err)
        return row
    info = solution.solve_info
    if info is not None:
        row.residual = info.residual
        row.condition_estimate = info.condition_estimate
    plan = getattr(solution, "plan", None)
    if plan is not None and config.space != ADDITIVE:
        row.shift = plan.shift
    logger.info(
        "%s %s, mesh size %d: L2 %.4e, H1 %.4e",
        problem.id,
        config.label,
        mesh_size,
        row.errors.l2,
        row.errors.h1,
    )
    return row


def convergence_study(
    problem: ProblemSpec,
    config: SpaceConfig,
    mesh_sizes: Sequence[int],
    net=None,
    checkpoint: Optional[str] = None,
    seed: Optional[int] = None,
    workers: int = 1,
) -> ConvergenceReport:
    """
    Errors and orders of ``config``'s space on a doubling sequence of meshes.

    A failing mesh size is recorded in its row status; the other rows still run.

    :param net: The network for enriched spaces (or any field used as ū_θ).
    :param checkpoint: Path of a checkpoint to load when ``net`` is not given.
    :param workers: Mesh sizes solved concurrently.
    """
    sizes = check_mesh_sizes(mesh_sizes)
    if config.space != CLASSICAL and net is None:
        if checkpoint is None:
            raise InputError(f"the {config.space} space needs a network or a checkpoint")
        net = load_checkpoint(checkpoint)

    if workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(lambda size: _run_row(problem, config, size, net), sizes))
    else:
        rows = [_run_row(problem, config, size, net) for size in sizes]

    for coarse, fine in zip(rows[:-1], rows[1:]):
        for norm in NORMS:
            first, second = coarse.error(norm), fine.error(norm)
            fine.orders[norm] = (
                None if first is None or second is None else order_between(first, second)
            )

    report = ConvergenceReport(problem.id, config, rows, seed=seed)
    if net is not None and problem.exact_u is not None:
        report.pinn["pinn_l2"] = pinn_l2_error(net, problem)
    return report
