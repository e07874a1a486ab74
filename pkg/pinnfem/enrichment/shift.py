"""Shift constant of the multiplicative enrichment and zero-point diagnostics."""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from pinnfem.errors import InputError, ShiftError
from pinnfem.fem.space import ADDITIVE, MULTIPLICATIVE
from pinnfem.logger import logger
from pinnfem.network.jets import Field, evaluate_field
from pinnfem.pinn.boundary import surrogate_for
from pinnfem.pinn.problems import ProblemSpec

DEFAULT_MARGIN = 0.5
DEFAULT_RESOLUTION = 64
SAMPLE_CAP = 100_000


@dataclass(frozen=True)
class EnrichmentPlan:
    """How a network enriches a space."""

    mode: str
    network: Field
    """The enrichment function ū_θ."""
    shift: float = 0.0
    shift_margin: float = DEFAULT_MARGIN
    sample_resolution: int = DEFAULT_RESOLUTION

    def __post_init__(self):
        if self.mode not in (ADDITIVE, MULTIPLICATIVE):
            raise InputError(f"unknown enrichment mode '{self.mode}'")


def sample_grid(dim: int, resolution: int = DEFAULT_RESOLUTION) -> np.ndarray:
    """Uniform grid including the boundary, at most ``SAMPLE_CAP`` points."""
    if resolution < 2:
        raise InputError(f"sample resolution must be at least 2, got {resolution}")
    resolution = min(resolution, int(SAMPLE_CAP ** (1.0 / dim)))
    axis = np.linspace(0.0, 1.0, resolution)
    grids = np.meshgrid(*([axis] * dim), indexing="ij")
    return np.column_stack([grid.ravel() for grid in grids])


def _sampled_values(field: Field, dim: int, resolution: int) -> Tuple[np.ndarray, np.ndarray]:
    points = sample_grid(dim, resolution)
    values = evaluate_field(field, points)
    if not np.all(np.isfinite(values)):
        raise InputError("the network produced non-finite values on the sample grid")
    return points, values


def compute_shift(
    net,
    problem: ProblemSpec,
    margin: float = DEFAULT_MARGIN,
    resolution: int = DEFAULT_RESOLUTION,
) -> float:
    """C = max(0, δ − min ū_θ) over the sample grid."""
    field = surrogate_for(net, problem)
    _, values = _sampled_values(field, problem.dim, resolution)
    shift = max(0.0, margin - float(values.min()))
    logger.debug("Sampled minimum %.6e, shift %.6e (margin %g)", values.min(), shift, margin)
    return shift


def check_margin(plan: EnrichmentPlan, dim: int) -> None:
    """Raise when ū_θ + C drops below the margin on the sample grid."""
    _, values = _sampled_values(plan.network, dim, plan.sample_resolution)
    minimum = float(values.min()) + plan.shift
    tolerance = 1e-12 * max(1.0, abs(plan.shift_margin))
    if minimum < plan.shift_margin - tolerance:
        raise ShiftError(
            f"ū_θ + C reaches {minimum:.6e}, below the margin {plan.shift_margin}; "
            "recompute the shift with a larger margin"
        )


@dataclass(frozen=True)
class ZeroPointReport:
    """Where the sampled |ū_θ| is smallest and what that implies."""

    minimum_abs: float
    location: Tuple[float, ...]
    sign_change: bool
    below_margin: bool
    near_boundary: bool
    linf_lower_bound: Optional[float] = None
    """|u(x*)|: no member of the unshifted multiplicative space gets closer in L∞."""

    @property
    def has_zero_points(self) -> bool:
        return self.sign_change or self.below_margin


def zero_point_certificate(
    net,
    problem: ProblemSpec,
    resolution: int = DEFAULT_RESOLUTION,
    margin: float = DEFAULT_MARGIN,
) -> ZeroPointReport:
    """
    Sampled near-zeros of ū_θ.

    Every member of V_h·ū_θ vanishes where ū_θ does, so |u(x*)| at a zero x*
    bounds the L∞ error of the unshifted multiplicative space from below.
    """
    field = surrogate_for(net, problem)
    points, values = _sampled_values(field, problem.dim, resolution)
    index = int(np.argmin(np.abs(values)))
    location = points[index]
    minimum_abs = float(abs(values[index]))
    below_margin = minimum_abs < margin
    spacing = 1.0 / (int(round(len(points) ** (1.0 / problem.dim))) - 1)
    near_boundary = bool(np.any(np.minimum(location, 1.0 - location) <= 2 * spacing + 1e-15))
    bound = None
    if below_margin and problem.exact_u is not None:
        bound = float(abs(evaluate_field(problem.exact_u, location[None, :])[0]))
    report = ZeroPointReport(
        minimum_abs=minimum_abs,
        location=tuple(float(value) for value in location),
        sign_change=bool(values.min() < 0 < values.max()) or minimum_abs == 0.0,
        below_margin=below_margin,
        near_boundary=near_boundary,
        linf_lower_bound=bound,
    )
    if report.has_zero_points:
        logger.warning(
            "ū_θ has near-zeros: min |ū_θ| = %.3e at %s", minimum_abs, list(report.location)
        )
    return report
