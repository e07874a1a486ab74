"""Built-in runs reproducing the comparison tables."""

from dataclasses import dataclass, replace
from typing import Dict, Tuple

from pinnfem.analysis.report import TableColumn
from pinnfem.config import (
    ALL_SPACES,
    OutputSection,
    RunConfig,
    default_fem,
    default_pinn,
)
from pinnfem.errors import ConfigError
from pinnfem.fem.elements import HERMITE, LAGRANGE
from pinnfem.fem.solver import AUTO, DIRECT
from pinnfem.fem.space import CLASSICAL, MULTIPLICATIVE
from pinnfem.pinn.problems import get_problem

SEEDS = (0, 1, 2, 3, 4)

STUDY = "study"
SOLVE = "solve"


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    config: RunConfig
    tables: Tuple[Tuple[str, Tuple[TableColumn, ...]], ...] = ()
    """(file suffix, columns) of each comparison table the preset writes."""
    command: str = STUDY


def _config(problem_id, degree, spaces, sizes, name, element=LAGRANGE, **pinn) -> RunConfig:
    problem = get_problem(problem_id)
    fem = replace(
        default_fem(problem),
        element=element,
        degree=degree,
        spaces=spaces,
        mesh_sizes=sizes,
    )
    return RunConfig(
        problem_id,
        replace(default_pinn(problem), seeds=SEEDS, **pinn),
        fem,
        OutputSection(dir=f"pinnfem-out/{name}"),
    )


def _three_way(norm: str) -> Tuple[Tuple[str, Tuple[TableColumn, ...]], ...]:
    return (("", tuple((space, norm) for space in ALL_SPACES)),)


def _two_way() -> Tuple[Tuple[str, Tuple[TableColumn, ...]], ...]:
    return (
        (
            "",
            (
                (CLASSICAL, "l2"),
                (CLASSICAL, "h1_semi"),
                (MULTIPLICATIVE, "l2"),
                (MULTIPLICATIVE, "h1_semi"),
            ),
        ),
    )


POISSON_1D = (10, 20, 40, 80, 160, 320)
BIHARMONIC_1D = (5, 10, 20, 40, 80)
GRID_2D = (4, 8, 16, 32, 64)
GRID_3D = (2, 4, 8, 16, 32)
PAIR = (CLASSICAL, MULTIPLICATIVE)


def _one_d(name, degree, norm, label) -> Preset:
    return Preset(
        name,
        f"1D Poisson, P{degree}, {label} errors of V_h, V_h+ and V_h*",
        _config("p1d_poisson", degree, ALL_SPACES, POISSON_1D, name),
        _three_way(norm),
    )


def _two_d(
    name, problem_id, degree, label, sizes=GRID_2D, ritz=False, solver=AUTO
) -> Preset:
    budget = {"epochs_ritz": 10000, "epochs_residual": 0} if ritz else {}
    config = _config(problem_id, degree, PAIR, sizes, name, **budget)
    config = replace(config, fem=replace(config.fem, solver=solver))
    return Preset(name, f"2D, {label}, P{degree}, V_h vs V_h*", config, _two_way())


PRESETS: Dict[str, Preset] = {
    preset.name: preset
    for preset in (
        _one_d("table2", 1, "l2", "L2"),
        _one_d("table3", 1, "h1_semi", "H1"),
        _one_d("table4", 2, "l2", "L2"),
        _one_d("table5", 2, "h1_semi", "H1"),
        _one_d("table6", 3, "l2", "L2"),
        _one_d("table7", 3, "h1_semi", "H1"),
        Preset(
            "table8",
            "1D biharmonic, Hermite cubic, L2/H1/H2 errors of V_h, V_h+ and V_h*",
            _config("p1d_biharmonic", 3, ALL_SPACES, BIHARMONIC_1D, "table8", HERMITE),
            tuple(
                (f"_{space}", ((space, "l2"), (space, "h1_semi"), (space, "h2")))
                for space in ALL_SPACES
            ),
        ),
        _two_d("table9", "p2d_c0", 1, "c = 0"),
        _two_d("table10", "p2d_c0", 2, "c = 0"),
        _two_d("table11", "p2d_cm5", 1, "c = -5"),
        _two_d("table12", "p2d_cm5", 2, "c = -5"),
        _two_d(
            "table13",
            "p2d_eig",
            1,
            "c = -2pi^2+0.01",
            (8, 16, 32, 64, 128, 256),
            ritz=True,
        ),
        _two_d(
            "table14",
            "p2d_eig",
            2,
            "c = -2pi^2+0.01",
            (4, 8, 16, 32, 64, 128, 256),
            ritz=True,
            solver=DIRECT,
        ),
        Preset(
            "table15",
            "3D Poisson, P1, V_h vs V_h*",
            _config("p3d_poisson", 1, PAIR, GRID_3D, "table15"),
            _two_way(),
        ),
        Preset(
            "fig3",
            "2D, c = -2pi^2+0.01, P2, h = 1/32: field dumps of V_h and V_h*",
            replace(
                _config(
                    "p2d_eig", 2, PAIR, (32,), "fig3", epochs_ritz=10000, epochs_residual=0
                ),
                output=OutputSection(dir="pinnfem-out/fig3", dump_fields=True),
            ),
            command=SOLVE,
        ),
    )
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown preset '{name}' (known: {', '.join(PRESETS)})"
        ) from None


def describe_presets() -> str:
    return "\n".join(f"  {name:<8} {preset.description}" for name, preset in PRESETS.items())
