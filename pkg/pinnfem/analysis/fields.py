"""Point-wise solution and error dumps on uniform grids."""

import csv

import numpy as np

from pinnfem.errors import InputError
from pinnfem.fem.space import FESolution
from pinnfem.logger import logger
from pinnfem.network.jets import evaluate_field
from pinnfem.pinn.problems import ProblemSpec

AXES = ("x", "y", "z")


def uniform_grid(dim: int, resolution: int) -> np.ndarray:
    if resolution < 2:
        raise InputError(f"field resolution must be at least 2, got {resolution}")
    axis = np.linspace(0.0, 1.0, resolution)
    grids = np.meshgrid(*([axis] * dim), indexing="ij")
    return np.column_stack([grid.ravel() for grid in grids])


def field_dump(solution: FESolution, problem: ProblemSpec, resolution: int, path: str) -> str:
    """
    CSV of ``x[,y,z],u_h,u,abs_error`` on a uniform grid with ``resolution`` points per axis.

    :return: The path written.
    """
    dim = solution.space.mesh.dim
    points = uniform_grid(dim, resolution)
    approximate = solution.evaluate(points).value
    exact = evaluate_field(problem.require_exact(), points)
    error = np.abs(exact - approximate)
    with open(path, "w", encoding="utf-8", newline="") as out_file:
        writer = csv.writer(out_file, lineterminator="\n")
        writer.writerow(list(AXES[:dim]) + ["u_h", "u", "abs_error"])
        for point, u_h, u, err in zip(points, approximate, exact, error):
            coordinates = [repr(float(v)) for v in point]
            writer.writerow(coordinates + [f"{u_h:.10e}", f"{u:.10e}", f"{err:.10e}"])
    logger.info("Wrote field dump %s (%d points)", path, len(points))
    return path
