import argparse
import os
import statistics
import sys
from argparse import Namespace
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import torch

from pinnfem.analysis.fields import field_dump
from pinnfem.analysis.norms import error_norms
from pinnfem.analysis.report import write_metadata, write_report, write_table
from pinnfem.analysis.study import (
    ConvergenceReport,
    SpaceConfig,
    convergence_study,
    solve_in_space,
)
from pinnfem.config import RunConfig, load_config
from pinnfem.errors import (
    CheckpointFormatError,
    ConfigError,
    InputError,
    PinnFemError,
    ShiftError,
    SolverError,
    TrainingDivergenceError,
)
from pinnfem.fem.assembly import assemble, dump_matrix
from pinnfem.fem.elements import ElementFamily
from pinnfem.fem.space import CLASSICAL, FunctionSpace
from pinnfem.logger import logger
from pinnfem.mesh import dump_mesh, structured_mesh
from pinnfem.network.dense import DenseNetwork
from pinnfem.pinn.checkpoint import load_checkpoint, save_checkpoint
from pinnfem.pinn.problems import REGISTRY, ProblemSpec, check_manufactured
from pinnfem.pinn.training import train, write_log
from pinnfem.presets import PRESETS, Preset, describe_presets, get_preset
from pinnfem.versions import __version__, get_thread_count

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGENCE = 3
EXIT_SOLVER = 4
EXIT_IO = 5


@dataclass
class CommandConfig:
    help: str
    handler: Callable[[Namespace], int]


def _resolve(args: Namespace) -> RunConfig:
    """Configuration from --preset or --config, with command-line overrides."""
    if args.preset:
        preset = get_preset(args.preset)
        if preset.command != args.command:
            raise ConfigError(
                f"preset '{preset.name}' runs with '{preset.command}', not '{args.command}'"
            )
        config = preset.config
    elif args.config:
        config = load_config(args.config)
    else:
        raise ConfigError("either --config or --preset is required")
    if args.seed is not None:
        config = config.with_seed(args.seed)
    if args.out:
        config = config.with_output(args.out)
    return config


def _problem(config: RunConfig) -> ProblemSpec:
    try:
        problem = config.problem
    except InputError as err:
        raise ConfigError(str(err)) from err
    check_manufactured(problem)
    return problem


def _output_dir(config: RunConfig) -> str:
    os.makedirs(config.output.dir, exist_ok=True)
    return config.output.dir


def _train(
    config: RunConfig, problem: ProblemSpec, seed: int, out_dir: str
) -> DenseNetwork:
    result = train(problem, config.pinn.training_config(seed))
    stem = os.path.join(out_dir, f"{problem.id}_seed{seed}")
    save_checkpoint(result.network, f"{stem}.net")
    write_log(result.log, f"{stem}_loss.csv")
    losses = result.final_losses
    print(
        f"{problem.id} seed {seed}: J_r={losses['residual']:.6e} "
        f"J_b={losses['boundary']:.6e} L2={losses.get('pinn_l2', float('nan')):.6e}"
    )
    return result.network


def _network(
    config: RunConfig, problem: ProblemSpec, seed: int, out_dir: str, train_first: bool
) -> DenseNetwork:
    """The network for ``seed``: given checkpoint, previous run, or a new training."""
    if config.pinn.checkpoint:
        return load_checkpoint(config.pinn.checkpoint)
    path = os.path.join(out_dir, f"{problem.id}_seed{seed}.net")
    if os.path.exists(path) and not train_first:
        logger.info("Using checkpoint %s", path)
        return load_checkpoint(path)
    if not train_first:
        raise ConfigError(
            f"no checkpoint for seed {seed} ({path}); run 'train' first or pass --train-first"
        )
    return _train(config, problem, seed, out_dir)


def cmd_train(args: Namespace) -> int:
    """Train a network per seed and write its checkpoint and loss log."""
    config = _resolve(args)
    problem = _problem(config)
    out_dir = _output_dir(config)
    for seed in config.pinn.run_seeds:
        _train(config, problem, seed, out_dir)
    return EXIT_OK


def _median_report(reports: List[ConvergenceReport]) -> ConvergenceReport:
    """The seed whose coarsest-mesh L2 error is the median."""

    def key(report: ConvergenceReport) -> float:
        error = report.rows[0].error("l2")
        return float("inf") if error is None else error

    ranked = sorted(reports, key=key)
    return ranked[(len(ranked) - 1) // 2]


def _summary(reports: Dict[str, List[ConvergenceReport]]) -> List[str]:
    lines = []
    classical = reports.get(CLASSICAL)
    reference = classical[0].rows[0].error("l2") if classical else None
    for space, runs in reports.items():
        if space == CLASSICAL:
            continue
        errors = sorted(
            run.rows[0].error("l2") for run in runs if run.rows[0].error("l2") is not None
        )
        if not errors:
            lines.append(f"{space}: no successful run")
            continue
        median = statistics.median(errors)
        line = f"{space}: L2 at coarsest mesh min {errors[0]:.4e}, median {median:.4e}"
        if reference:
            line += f", classical/median ratio {reference / median:.3e}"
        lines.append(line)
    return lines


def _report_stem(out_dir: str, problem: ProblemSpec, config: SpaceConfig, seed) -> str:
    stem = f"{problem.id}_{config.label}"
    if seed is not None:
        stem += f"_seed{seed}"
    return os.path.join(out_dir, stem)


def cmd_study(args: Namespace) -> int:
    """Convergence studies of every configured space; one CSV per space and seed."""
    config = _resolve(args)
    problem = _problem(config)
    sizes = config.fem.require_mesh_sizes()
    out_dir = _output_dir(config)
    train_first = args.train_first or bool(args.preset)
    workers = get_thread_count()
    seeds = config.pinn.run_seeds
    networks: Dict[int, DenseNetwork] = {}

    reports: Dict[str, List[ConvergenceReport]] = {}
    for space in config.fem.spaces:
        space_config = config.fem.space_config(space)
        runs = []
        for seed in [None] if space == CLASSICAL else seeds:
            net = None
            if seed is not None:
                if seed not in networks:
                    networks[seed] = _network(config, problem, seed, out_dir, train_first)
                net = networks[seed]
            report = convergence_study(
                problem, space_config, sizes, net=net, seed=seed, workers=workers
            )
            stem = _report_stem(out_dir, problem, space_config, seed)
            write_report(report, f"{stem}.csv")
            write_metadata(report, f"{stem}.meta")
            runs.append(report)
        reports[space] = runs

    if args.preset:
        _write_tables(get_preset(args.preset), reports, out_dir)
    for line in _summary(reports):
        print(line)
    failed = [r for runs in reports.values() for r in runs if not r.ok]
    return EXIT_SOLVER if failed else EXIT_OK


def _write_tables(
    preset: Preset, reports: Dict[str, List[ConvergenceReport]], out_dir: str
) -> None:
    chosen = {space: _median_report(runs) for space, runs in reports.items()}
    for suffix, columns in preset.tables:
        write_table(columns, chosen, os.path.join(out_dir, f"{preset.name}{suffix}.csv"))


def cmd_solve(args: Namespace) -> int:
    """Solve on a single mesh and dump the fields of every configured space."""
    config = _resolve(args)
    problem = _problem(config)
    sizes = config.fem.require_mesh_sizes()
    if len(sizes) != 1:
        raise ConfigError(f"solve needs exactly one mesh size, got {len(sizes)}")
    size = sizes[0]
    out_dir = _output_dir(config)
    seed = config.pinn.run_seeds[0]
    train_first = args.train_first or bool(args.preset)

    if config.output.dump_mesh:
        dump_mesh(structured_mesh(problem.dim, size), os.path.join(out_dir, f"mesh_{size}.txt"))
    if config.output.dump_matrix:
        space = FunctionSpace(
            structured_mesh(problem.dim, size),
            ElementFamily(config.fem.element, config.fem.degree, problem.dim),
        )
        dump_matrix(assemble(space, problem), os.path.join(out_dir, f"matrix_{size}.txt"))

    net = None
    for space in config.fem.spaces:
        space_config = config.fem.space_config(space)
        if space != CLASSICAL and net is None:
            net = _network(config, problem, seed, out_dir, train_first)
        solution = solve_in_space(problem, space_config, size, net)
        errors = error_norms(solution, problem)
        print(f"{space_config.label}: L2={errors.l2:.6e} H1={errors.h1:.6e}")
        if config.output.dump_fields:
            stem = _report_stem(out_dir, problem, space_config, None)
            field_dump(solution, problem, config.output.field_resolution, f"{stem}_fields.csv")
    return EXIT_OK


COMMANDS: Dict[str, CommandConfig] = {
    "train": CommandConfig(
        help="Train a PINN, write its checkpoint and loss log",
        handler=cmd_train,
    ),
    "study": CommandConfig(
        help="Run convergence studies and write report CSVs",
        handler=cmd_study,
    ),
    "solve": CommandConfig(
        help="Solve on one mesh and dump solution fields",
        handler=cmd_solve,
    ),
}


def _epilog() -> str:
    problems = "\n".join(
        f"  {name:<15} {problem.description}" for name, problem in REGISTRY.items()
    )
    return f"presets:\n{describe_presets()}\n\nproblems:\n{problems}"


def _parse_args(argv: Optional[Sequence[str]] = None) -> Namespace:
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        prog="pinnfem",
        description="PINN-enriched finite element solver",
        epilog=_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, info in COMMANDS.items():
        subp = subparsers.add_parser(
            name,
            help=info.help,
            epilog=_epilog(),
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        subp.add_argument("-c", "--config", dest="config", help="Path of the run configuration")
        subp.add_argument(
            "-p",
            "--preset",
            dest="preset",
            choices=list(PRESETS),
            metavar="NAME",
            help="Built-in run, see the list below",
        )
        subp.add_argument(
            "-s", "--seed", dest="seed", type=int, help="Seed, overrides the configuration"
        )
        subp.add_argument(
            "-t",
            "--train-first",
            dest="train_first",
            action="store_true",
            help="Train missing networks instead of failing",
        )
        subp.add_argument("-o", "--out", dest="out", help="Output directory")
    return parser.parse_args(argv)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run a command and map failures to exit codes."""
    args = _parse_args(argv)
    torch.set_num_threads(get_thread_count())
    try:
        return COMMANDS[args.command].handler(args)
    except TrainingDivergenceError as err:
        logger.error("%s", err)
        return EXIT_DIVERGENCE
    except (SolverError, ShiftError) as err:
        logger.error("%s", err)
        return EXIT_SOLVER
    except CheckpointFormatError as err:
        logger.error("%s", err)
        return EXIT_IO
    except PinnFemError as err:
        logger.error("%s", err)
        return EXIT_CONFIG
    except OSError as err:
        logger.error("%s", err)
        return EXIT_IO


def main() -> None:
    """Run the Command Line Interface."""
    sys.exit(run())
