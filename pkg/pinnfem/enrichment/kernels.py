"""Basis kernels of the additive and multiplicative enriched spaces."""

from typing import Optional

import numpy as np

from pinnfem.errors import ShiftError
from pinnfem.fem.kernels import ClassicalKernel, Coefficients, select_trace
from pinnfem.fem.space import ADDITIVE, MULTIPLICATIVE, CellTabulation, FEValue, FunctionSpace
from pinnfem.network.jets import JetValue, evaluate_jet
from pinnfem.pinn.problems import ProblemSpec, shifted_problem


def _reshape_jet(jet: JetValue, shape) -> JetValue:
    return JetValue(
        jet.value.reshape(shape),
        None if jet.gradient is None else jet.gradient.reshape(shape + jet.gradient.shape[1:]),
        None if jet.hessian is None else jet.hessian.reshape(shape + jet.hessian.shape[1:]),
    )


class EnrichedKernel(ClassicalKernel):
    """Evaluates the enrichment function once per tabulated point."""

    def surrogate_jet(self, points: np.ndarray, order: int) -> JetValue:
        """Jets of ū_θ at points of shape ``(..., dim)``."""
        shape = points.shape[:-1]
        flat = points.reshape(-1, points.shape[-1])
        return _reshape_jet(evaluate_jet(self.space.network, flat, order), shape)

    def attach(self, tab: CellTabulation) -> CellTabulation:
        tab.surrogate = self.surrogate_jet(tab.points, tab.order)
        return tab


class AdditiveKernel(EnrichedKernel):
    """u_h = w_h + ū_θ, with w_h in the classical space tested against V_h."""

    def transform(self, tab: CellTabulation) -> CellTabulation:
        return self.attach(tab)

    def load_correction(
        self, problem: ProblemSpec, tab: CellTabulation, coefficients: Coefficients
    ) -> np.ndarray:
        """B[ū_θ, ψ_i] per cell."""
        surrogate = tab.surrogate
        if problem.is_biharmonic:
            return np.einsum(
                "cq,cq,cqi->ci", tab.weights, surrogate.hessian[..., 0, 0], tab.hessians[..., 0, 0]
            )
        return np.einsum(
            "cq,cqd,cqid->ci", tab.weights * coefficients.a, surrogate.gradient, tab.gradients
        ) + np.einsum("cq,cq,cqi->ci", tab.weights * coefficients.c, surrogate.value, tab.values)

    def member(self, tab: CellTabulation, coefficients: np.ndarray) -> FEValue:
        base = super().member(tab, coefficients)
        surrogate = tab.surrogate
        return FEValue(
            base.value + surrogate.value,
            None if base.gradient is None else base.gradient + surrogate.gradient,
            None if base.hessian is None else base.hessian + surrogate.hessian,
        )

    def trace_values(
        self, data: JetValue, points: np.ndarray, slope_dofs: np.ndarray
    ) -> np.ndarray:
        """g − ū_θ (and g′ − ū_θ′ at slope DoFs)."""
        order = 0 if data.gradient is None else 1
        surrogate = evaluate_jet(self.space.network, points, order)
        slopes: Optional[np.ndarray] = None
        if order:
            slopes = data.gradient[:, 0] - surrogate.gradient[:, 0]
        return select_trace(data.value - surrogate.value, slopes, slope_dofs)


class MultiplicativeKernel(EnrichedKernel):
    """
    u_h = w_h·Φ − C with Φ = ū_θ + C, trial and test functions ψ_i·Φ.

    Assembles the problem shifted by C, whose solution is u + C.
    """

    def __init__(self, space: FunctionSpace):
        super().__init__(space)
        self.offset = space.shift

    def target_problem(self, problem: ProblemSpec) -> ProblemSpec:
        if self.offset == 0.0:
            return problem
        return shifted_problem(problem, self.offset)

    def factor_jet(self, points: np.ndarray, order: int) -> JetValue:
        """Jets of Φ = ū_θ + C."""
        jet = self.surrogate_jet(points, order)
        return jet._replace(value=jet.value + self.offset)

    def transform(self, tab: CellTabulation) -> CellTabulation:
        factor = self.factor_jet(tab.points, tab.order)
        tab.surrogate = factor
        phi = tab.values
        values = phi * factor.value[..., None]
        gradients = hessians = None
        if tab.gradients is not None:
            gradients = (
                tab.gradients * factor.value[..., None, None]
                + phi[..., None] * factor.gradient[:, :, None, :]
            )
        if tab.hessians is not None:
            outer = np.einsum("cqnd,cqe->cqnde", tab.gradients, factor.gradient)
            hessians = (
                tab.hessians * factor.value[..., None, None, None]
                + outer
                + outer.transpose(0, 1, 2, 4, 3)
                + phi[..., None, None] * factor.hessian[:, :, None, :, :]
            )
        tab.values, tab.gradients, tab.hessians = values, gradients, hessians
        return tab

    def trace_values(
        self, data: JetValue, points: np.ndarray, slope_dofs: np.ndarray
    ) -> np.ndarray:
        """g̃/Φ (and (g̃′Φ − g̃Φ′)/Φ² at slope DoFs), with g̃ the shifted data."""
        order = 0 if data.gradient is None else 1
        factor = self.factor_jet(points, order)
        if np.any(factor.value <= 0):
            raise ShiftError(
                f"ū_θ + C reaches {factor.value.min():.6e} at a boundary DoF; "
                "recompute the shift with a larger margin"
            )
        values = data.value / factor.value
        slopes = None
        if order:
            slopes = (
                data.gradient[:, 0] * factor.value - data.value * factor.gradient[:, 0]
            ) / factor.value**2
        return select_trace(values, slopes, slope_dofs)


KERNELS = {ADDITIVE: AdditiveKernel, MULTIPLICATIVE: MultiplicativeKernel}


def kernel_for(space: FunctionSpace) -> EnrichedKernel:
    return KERNELS[space.enrichment](space)
