"""Two-phase PINN training: deep Ritz energy first, strong-form residual second."""

import csv
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import torch

from pinnfem.errors import CapabilityError, InputError, TrainingDivergenceError
from pinnfem.logger import logger
from pinnfem.network.adam import AdamState, adam_step
from pinnfem.network.dense import (
    BOUNDARY_DIRICHLET_PRODUCT,
    BOUNDARY_NONE,
    DenseNetwork,
    init_network,
)
from pinnfem.pinn.collocation import CollocationSet, make_collocation
from pinnfem.pinn.losses import (
    boundary_loss,
    pinn_l2_error,
    residual_loss,
    ritz_loss,
)
from pinnfem.pinn.problems import ProblemSpec

PENALTY = "penalty"
OPERATOR = "operator"
BOUNDARY_MODES = (PENALTY, OPERATOR)

RITZ_PHASE = "ritz"
RESIDUAL_PHASE = "residual"


@dataclass
class TrainingConfig:
    """Network architecture and optimizer budget."""

    layer_sizes: Tuple[int, ...]
    learning_rate: float
    epochs_ritz: int = 0
    epochs_residual: int = 0
    collocation_count: int = 1000
    boundary_mode: str = OPERATOR
    penalty_lambda: float = 1000.0
    seed: int = 0
    log_every: int = 1000

    @property
    def total_epochs(self) -> int:
        return self.epochs_ritz + self.epochs_residual

    @property
    def network_boundary_mode(self) -> str:
        if self.boundary_mode == OPERATOR:
            return BOUNDARY_DIRICHLET_PRODUCT
        return BOUNDARY_NONE

    def validate(self, problem: ProblemSpec) -> None:
        if self.epochs_ritz < 0 or self.epochs_residual < 0:
            raise InputError("epoch counts must be non-negative")
        if self.total_epochs == 0:
            raise InputError("training needs at least one epoch")
        if self.boundary_mode not in BOUNDARY_MODES:
            raise InputError(f"unknown boundary mode '{self.boundary_mode}'")
        if self.layer_sizes[0] != problem.dim:
            raise InputError(
                f"input layer size {self.layer_sizes[0]} does not match "
                f"problem dimension {problem.dim}"
            )
        if self.epochs_ritz > 0 and problem.is_biharmonic:
            raise CapabilityError("the Ritz phase is not available for the biharmonic operator")
        if self.learning_rate <= 0:
            raise InputError(f"learning rate must be positive, got {self.learning_rate}")


@dataclass(frozen=True)
class TrainingRecord:
    """One epoch of the training log; losses not evaluated that epoch are None."""

    epoch: int
    phase: str
    objective: float
    residual: Optional[float] = None
    boundary: Optional[float] = None
    ritz_shifted: Optional[float] = None


@dataclass
class TrainingResult:
    network: DenseNetwork
    log: List[TrainingRecord]
    phase_switch_epoch: Optional[int] = None
    """First epoch of the residual phase when both phases ran."""
    residual_at_switch: Optional[float] = None
    final_losses: Dict[str, float] = field(default_factory=dict)


def _objective(
    phase: str,
    net: DenseNetwork,
    problem: ProblemSpec,
    colloc: CollocationSet,
    config: TrainingConfig,
) -> Tuple[torch.Tensor, Dict[str, torch.Tensor]]:
    terms: Dict[str, torch.Tensor] = {}
    if phase == RITZ_PHASE:
        terms["ritz"] = ritz_loss(net, problem, colloc)
        objective = terms["ritz"]
    else:
        terms["residual"] = residual_loss(net, problem, colloc)
        objective = terms["residual"]
    if config.boundary_mode == PENALTY:
        terms["boundary"] = boundary_loss(net, problem, colloc)
        objective = objective + config.penalty_lambda * terms["boundary"]
    return objective, terms


def evaluate_losses(
    net: DenseNetwork, problem: ProblemSpec, colloc: CollocationSet
) -> Dict[str, float]:
    """Every loss available for ``problem``, as floats."""
    losses = {
        "residual": float(residual_loss(net, problem, colloc)),
        "boundary": float(boundary_loss(net, problem, colloc)),
    }
    if problem.exact_u is not None:
        if not problem.is_biharmonic:
            exact_energy = float(ritz_loss(problem.exact_u, problem, colloc))
            losses["ritz_shifted"] = float(ritz_loss(net, problem, colloc)) - exact_energy
        losses["pinn_l2"] = pinn_l2_error(net, problem)
    return losses


def train(problem: ProblemSpec, config: TrainingConfig) -> TrainingResult:
    """
    Train u_θ for ``problem``.

    The Ritz phase minimizes J_R for ``epochs_ritz`` full-batch Adam steps,
    then the residual phase minimizes J_r for ``epochs_residual`` steps. In
    penalty mode λ·J_b is added in both phases; in operator mode the network
    is wrapped by the boundary operator and J_b vanishes.

    :raises TrainingDivergenceError: when a loss becomes non-finite.
    """
    config.validate(problem)
    colloc = make_collocation(problem.dim, config.collocation_count)
    template = init_network(
        config.layer_sizes, config.seed, boundary_mode=config.network_boundary_mode
    )
    theta = template.parameters
    state = AdamState(theta.numel(), config.learning_rate)
    exact_energy = None
    if problem.exact_u is not None and not problem.is_biharmonic:
        exact_energy = float(ritz_loss(problem.exact_u, problem, colloc))

    logger.info(
        "Training %s: layers=%s, %d Ritz + %d residual epochs, %d collocation points, %s boundary",
        problem.id,
        list(config.layer_sizes),
        config.epochs_ritz,
        config.epochs_residual,
        colloc.interior_points.shape[0],
        config.boundary_mode,
    )

    log: List[TrainingRecord] = []
    result = TrainingResult(network=template, log=log)
    epoch = 0
    phases = ((RITZ_PHASE, config.epochs_ritz), (RESIDUAL_PHASE, config.epochs_residual))
    for phase, count in phases:
        if count and phase == RESIDUAL_PHASE and config.epochs_ritz:
            result.phase_switch_epoch = epoch
            logger.info("Switching to the residual phase at epoch %d", epoch)
        for _ in range(count):
            net = template.with_parameters(theta.detach().requires_grad_(True))
            objective, terms = _objective(phase, net, problem, colloc, config)
            values = {name: float(term) for name, term in terms.items()}
            if not all(math.isfinite(value) for value in values.values()):
                raise TrainingDivergenceError(epoch, values)

            periodic = (epoch + 1) % config.log_every == 0 or epoch + 1 == config.total_epochs
            residual = values.get("residual")
            if residual is None and periodic:
                residual = float(residual_loss(net, problem, colloc))
            boundary = values.get("boundary")
            if boundary is None and periodic:
                boundary = float(boundary_loss(net, problem, colloc))
            ritz_shifted = None
            if exact_energy is not None:
                if "ritz" in values:
                    ritz_shifted = values["ritz"] - exact_energy
                elif periodic:
                    ritz_shifted = float(ritz_loss(net, problem, colloc)) - exact_energy
            record = TrainingRecord(
                epoch=epoch,
                phase=phase,
                objective=float(objective),
                residual=residual,
                boundary=boundary,
                ritz_shifted=ritz_shifted,
            )
            log.append(record)
            if result.phase_switch_epoch is not None and epoch == result.phase_switch_epoch:
                result.residual_at_switch = residual
            if periodic:
                logger.info(
                    "epoch %d [%s] objective=%.6e residual=%s",
                    epoch + 1,
                    phase,
                    record.objective,
                    "-" if residual is None else "%.6e" % residual,
                )

            (grad,) = torch.autograd.grad(objective, net.parameters)
            theta, state = adam_step(state, theta, grad)
            epoch += 1

    result.network = template.with_parameters(theta.detach().clone())
    result.final_losses = evaluate_losses(result.network, problem, colloc)
    logger.info(
        "Training done: %s",
        ", ".join("%s=%.6e" % item for item in result.final_losses.items()),
    )
    return result


LOG_COLUMNS = ("epoch", "phase", "objective", "residual", "boundary", "ritz_shifted")


def write_log(log: List[TrainingRecord], path: str) -> None:
    """One CSV row per epoch; losses not evaluated that epoch are left empty."""
    with open(path, "w", encoding="utf-8", newline="") as out_file:
        writer = csv.writer(out_file, lineterminator="\n")
        writer.writerow(LOG_COLUMNS)
        for record in log:
            row = [record.epoch, record.phase]
            for name in LOG_COLUMNS[2:]:
                value = getattr(record, name)
                row.append("" if value is None else repr(value))
            writer.writerow(row)
    logger.info("Wrote training log %s (%d epochs)", path, len(log))
