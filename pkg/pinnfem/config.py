"""Run configuration files.

INI syntax, four sections::

    [problem]
    id = p1d_poisson

    [pinn]
    layers = 1 20 1
    lr = 2e-3
    epochs_ritz = 0
    epochs_residual = 10000
    collocation = 1000
    boundary_mode = operator
    penalty_lambda = 1000
    seed = 0

    [fem]
    element = lagrange
    degree = 1
    space = all
    mesh_sizes = 10 20 40 80 160 320

    [output]
    dir = out
    dump_fields = false
    dump_mesh = false

Only ``problem.id`` is required; ``[pinn]`` defaults follow the training
budgets for the problem's dimension.
"""

import configparser
import re
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Tuple, TypeVar

from pinnfem.analysis.study import SpaceConfig
from pinnfem.enrichment.shift import DEFAULT_MARGIN
from pinnfem.errors import ConfigError, InputError
from pinnfem.fem.elements import HERMITE, LAGRANGE
from pinnfem.fem.solver import AUTO, METHODS
from pinnfem.fem.space import ADDITIVE, CLASSICAL, ENRICHMENTS, MULTIPLICATIVE
from pinnfem.pinn.problems import ProblemSpec, get_problem
from pinnfem.pinn.training import BOUNDARY_MODES, OPERATOR, TrainingConfig

ALL_SPACES = (CLASSICAL, ADDITIVE, MULTIPLICATIVE)

T = TypeVar("T")


@dataclass
class PinnSection:
    layers: Tuple[int, ...]
    lr: float
    epochs_ritz: int
    epochs_residual: int
    collocation: int
    boundary_mode: str = OPERATOR
    penalty_lambda: float = 1000.0
    seed: int = 0
    seeds: Tuple[int, ...] = ()
    """Seeds of a multi-seed run; ``(seed,)`` when empty."""
    log_every: int = 1000
    checkpoint: Optional[str] = None
    """Existing checkpoint to use instead of training."""

    @property
    def run_seeds(self) -> Tuple[int, ...]:
        return self.seeds or (self.seed,)

    def training_config(self, seed: Optional[int] = None) -> TrainingConfig:
        return TrainingConfig(
            layer_sizes=self.layers,
            learning_rate=self.lr,
            epochs_ritz=self.epochs_ritz,
            epochs_residual=self.epochs_residual,
            collocation_count=self.collocation,
            boundary_mode=self.boundary_mode,
            penalty_lambda=self.penalty_lambda,
            seed=self.seed if seed is None else seed,
            log_every=self.log_every,
        )


@dataclass
class FemSection:
    element: str = LAGRANGE
    degree: int = 1
    spaces: Tuple[str, ...] = (CLASSICAL,)
    mesh_sizes: Tuple[int, ...] = ()
    solver: str = AUTO
    quadrature_degree: Optional[int] = None
    shift_margin: float = DEFAULT_MARGIN

    def space_config(self, space: str) -> SpaceConfig:
        return SpaceConfig(
            space=space,
            element=self.element,
            degree=self.degree,
            quadrature_degree=self.quadrature_degree,
            solver=self.solver,
            shift_margin=self.shift_margin,
        )

    def require_mesh_sizes(self) -> Tuple[int, ...]:
        if not self.mesh_sizes:
            raise ConfigError("fem.mesh_sizes is empty")
        return self.mesh_sizes

    @property
    def enriched(self) -> bool:
        return any(space != CLASSICAL for space in self.spaces)


@dataclass
class OutputSection:
    dir: str = "pinnfem-out"
    dump_fields: bool = False
    dump_mesh: bool = False
    dump_matrix: bool = False
    field_resolution: int = 101


@dataclass
class RunConfig:
    problem_id: str
    pinn: PinnSection
    fem: FemSection = field(default_factory=FemSection)
    output: OutputSection = field(default_factory=OutputSection)

    @property
    def problem(self) -> ProblemSpec:
        return get_problem(self.problem_id)

    def with_seed(self, seed: int) -> "RunConfig":
        return replace(self, pinn=replace(self.pinn, seed=seed, seeds=(seed,)))

    def with_output(self, directory: str) -> "RunConfig":
        return replace(self, output=replace(self.output, dir=directory))


def default_pinn(problem: ProblemSpec) -> PinnSection:
    """Training budgets by dimension."""
    if problem.dim == 1:
        return PinnSection((1, 20, 1), 2e-3, 0, 10000, 1000)
    if problem.dim == 2:
        return PinnSection((2, 20, 40, 20, 1), 1e-3, 0, 10000, 400)
    return PinnSection((3, 20, 40, 20, 1), 3e-3, 15000, 10000, 1000)


def default_fem(problem: ProblemSpec) -> FemSection:
    if problem.is_biharmonic:
        return FemSection(element=HERMITE, degree=3)
    return FemSection()


def parse_spaces(value: str) -> Tuple[str, ...]:
    names = [name for name in re.split(r"[\s,]+", value.strip()) if name]
    if names == ["all"]:
        return ALL_SPACES
    for name in names:
        if name not in ENRICHMENTS:
            raise ValueError(f"unknown space '{name}'")
    if not names:
        raise ValueError("no space given")
    return tuple(names)


def parse_integers(value: str) -> Tuple[int, ...]:
    return tuple(int(item) for item in re.split(r"[\s,]+", value.strip()) if item)


def check_doubling(sizes: Tuple[int, ...]) -> Tuple[int, ...]:
    if not sizes:
        raise ValueError("mesh size list is empty")
    if sizes[0] < 1:
        raise ValueError("mesh sizes must be positive")
    for coarse, fine in zip(sizes[:-1], sizes[1:]):
        if fine != 2 * coarse:
            raise ValueError(f"mesh sizes must double, got {coarse} then {fine}")
    return sizes


def _choice(options) -> Callable[[str], str]:
    def _check(value: str) -> str:
        value = value.strip()
        if value not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got '{value}'")
        return value

    return _check


def _boolean(value: str) -> bool:
    lowered = value.strip().lower()
    if lowered not in configparser.ConfigParser.BOOLEAN_STATES:
        raise ValueError(f"not a boolean: '{value}'")
    return configparser.ConfigParser.BOOLEAN_STATES[lowered]


def _line_of(text: str, section: str, key: str) -> Optional[int]:
    current = None
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("[") and stripped.endswith("]"):
            current = stripped[1:-1].strip()
        elif current == section and re.match(rf"{re.escape(key)}\s*[=:]", stripped):
            return number
    return None


class _Reader:
    def __init__(self, parser: configparser.ConfigParser, text: str):
        self.parser = parser
        self.text = text

    def get(self, section: str, key: str, convert: Callable[[str], T], default: T) -> T:
        if not self.parser.has_option(section, key):
            return default
        raw = self.parser.get(section, key)
        try:
            return convert(raw)
        except ValueError as err:
            raise ConfigError(
                f"invalid value for {section}.{key}: {err}", _line_of(self.text, section, key)
            ) from err


KNOWN_KEYS: Dict[str, List[str]] = {
    "problem": ["id"],
    "pinn": [
        "layers",
        "lr",
        "epochs_ritz",
        "epochs_residual",
        "collocation",
        "boundary_mode",
        "penalty_lambda",
        "seed",
        "seeds",
        "log_every",
        "checkpoint",
    ],
    "fem": [
        "element",
        "degree",
        "space",
        "mesh_sizes",
        "solver",
        "quadrature_degree",
        "shift_margin",
    ],
    "output": ["dir", "dump_fields", "dump_mesh", "dump_matrix", "field_resolution"],
}


def parse_config(text: str, source: str = "<string>") -> RunConfig:
    """Parse configuration text; errors name the offending line when known."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text, source=source)
    except configparser.ParsingError as err:
        line = err.errors[0][0] if err.errors else None
        raise ConfigError(f"{source}: malformed configuration", line) from err
    except configparser.Error as err:
        raise ConfigError(f"{source}: {err}", getattr(err, "lineno", None)) from err

    for section in parser.sections():
        if section not in KNOWN_KEYS:
            raise ConfigError(f"unknown section [{section}]", _line_of_section(text, section))
        for key in parser.options(section):
            if key not in KNOWN_KEYS[section]:
                raise ConfigError(
                    f"unknown key '{key}' in [{section}]", _line_of(text, section, key)
                )

    if not parser.has_option("problem", "id"):
        raise ConfigError("missing [problem] id")
    problem_id = parser.get("problem", "id").strip()
    try:
        problem = get_problem(problem_id)
    except InputError as err:
        raise ConfigError(str(err), _line_of(text, "problem", "id")) from err

    read = _Reader(parser, text)
    pinn = default_pinn(problem)
    pinn = PinnSection(
        layers=read.get("pinn", "layers", parse_integers, pinn.layers),
        lr=read.get("pinn", "lr", float, pinn.lr),
        epochs_ritz=read.get("pinn", "epochs_ritz", int, pinn.epochs_ritz),
        epochs_residual=read.get("pinn", "epochs_residual", int, pinn.epochs_residual),
        collocation=read.get("pinn", "collocation", int, pinn.collocation),
        boundary_mode=read.get("pinn", "boundary_mode", _choice(BOUNDARY_MODES), OPERATOR),
        penalty_lambda=read.get("pinn", "penalty_lambda", float, pinn.penalty_lambda),
        seed=read.get("pinn", "seed", int, pinn.seed),
        seeds=read.get("pinn", "seeds", parse_integers, ()),
        log_every=read.get("pinn", "log_every", int, pinn.log_every),
        checkpoint=read.get("pinn", "checkpoint", str.strip, None),
    )
    fem = default_fem(problem)
    fem = FemSection(
        element=read.get("fem", "element", _choice((LAGRANGE, HERMITE)), fem.element),
        degree=read.get("fem", "degree", int, fem.degree),
        spaces=read.get("fem", "space", parse_spaces, fem.spaces),
        mesh_sizes=read.get(
            "fem", "mesh_sizes", lambda value: check_doubling(parse_integers(value)), ()
        ),
        solver=read.get("fem", "solver", _choice(METHODS), fem.solver),
        quadrature_degree=read.get("fem", "quadrature_degree", int, None),
        shift_margin=read.get("fem", "shift_margin", float, fem.shift_margin),
    )
    output = OutputSection(
        dir=read.get("output", "dir", str.strip, OutputSection.dir),
        dump_fields=read.get("output", "dump_fields", _boolean, False),
        dump_mesh=read.get("output", "dump_mesh", _boolean, False),
        dump_matrix=read.get("output", "dump_matrix", _boolean, False),
        field_resolution=read.get(
            "output", "field_resolution", int, OutputSection.field_resolution
        ),
    )
    if pinn.layers[0] != problem.dim:
        raise ConfigError(
            f"pinn.layers starts with {pinn.layers[0]}, problem '{problem_id}' is {problem.dim}D",
            _line_of(text, "pinn", "layers"),
        )
    return RunConfig(problem_id, pinn, fem, output)


def _line_of_section(text: str, section: str) -> Optional[int]:
    for number, line in enumerate(text.splitlines(), start=1):
        if line.strip() == f"[{section}]":
            return number
    return None


def load_config(path: str) -> RunConfig:
    """Read and parse a configuration file."""
    try:
        with open(path, "r", encoding="utf-8") as config_file:
            text = config_file.read()
    except FileNotFoundError as err:
        raise ConfigError(f"configuration file not found: {path}") from err
    return parse_config(text, source=path)
