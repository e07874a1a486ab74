import pytest

from pinnfem.analysis.report import table_rows
from pinnfem.analysis.study import ConvergenceReport, ConvergenceRow, SpaceConfig
from pinnfem.errors import ConfigError
from pinnfem.presets import PRESETS, SEEDS, SOLVE, describe_presets, get_preset


def _fake_report(space, sizes, dim):
    rows = [ConvergenceRow(mesh_size=size, dim=dim) for size in sizes]
    return ConvergenceReport("fake", SpaceConfig(space=space), rows)


def test_every_table_has_a_preset():
    names = {f"table{number}" for number in range(2, 16)}
    assert names <= set(PRESETS)
    assert get_preset("fig3").command == SOLVE


@pytest.mark.parametrize(
    "name,rows,columns",
    [
        ("table2", 6, 7),
        ("table7", 6, 7),
        ("table8", 5, 7),
        ("table9", 5, 9),
        ("table13", 6, 9),
        ("table14", 7, 9),
        ("table15", 5, 9),
    ],
)
def test_table_shapes(name, rows, columns):
    preset = get_preset(name)
    config = preset.config
    problem = config.problem
    reports = {
        space: _fake_report(space, config.fem.mesh_sizes, problem.dim)
        for space in config.fem.spaces
    }
    for _, table_columns in preset.tables:
        header, body = table_rows(table_columns, reports)
        assert len(header) == columns
        assert len(body) == rows


def test_presets_pin_seeds():
    for preset in PRESETS.values():
        assert preset.config.pinn.run_seeds == SEEDS


def test_eigen_presets_train_with_ritz_energy():
    for name in ("table13", "table14"):
        pinn = get_preset(name).config.pinn
        assert (pinn.epochs_ritz, pinn.epochs_residual) == (10000, 0)
    assert get_preset("table9").config.pinn.epochs_ritz == 0


def test_unknown_preset():
    with pytest.raises(ConfigError, match="table99"):
        get_preset("table99")


def test_description_lists_every_preset():
    text = describe_presets()
    assert all(name in text for name in PRESETS)
