import csv

import pytest

from pinnfem.analysis import SpaceConfig, convergence_study
from pinnfem.analysis.report import (
    format_float,
    write_metadata,
    write_report,
    write_table,
)
from pinnfem.pinn import get_problem


@pytest.fixture
def poisson_report():
    return convergence_study(get_problem("p1d_poisson"), SpaceConfig(), [10, 20])


@pytest.fixture
def grid_report():
    return convergence_study(get_problem("p2d_c0"), SpaceConfig(), [2, 4])


def _read(path):
    with open(path, encoding="utf-8") as in_file:
        return list(csv.reader(in_file))


def test_format_float():
    assert format_float(0.011894) == "1.18940e-02"
    assert format_float(None) == ""


def test_report_csv(tmp_path, poisson_report):
    path = tmp_path / "report.csv"
    write_report(poisson_report, str(path))
    rows = _read(path)
    assert rows[0] == [
        "n_or_h",
        "l2",
        "l2_order",
        "h1",
        "h1_order",
        "h1_semi",
        "h1_semi_order",
    ]
    assert [row[0] for row in rows[1:]] == ["10", "20"]
    assert rows[1][2] == ""
    assert float(rows[2][2]) == pytest.approx(2.0, abs=0.05)


def test_grid_mesh_parameter(tmp_path, grid_report):
    path = tmp_path / "report.csv"
    write_report(grid_report, str(path))
    assert [row[0] for row in _read(path)[1:]] == ["1/2", "1/4"]


def test_metadata(tmp_path, poisson_report):
    path = tmp_path / "report.meta"
    write_metadata(poisson_report, str(path), {"preset": "table2"})
    lines = path.read_text(encoding="utf-8").splitlines()
    assert "problem=p1d_poisson" in lines
    assert "row.10.status=ok" in lines
    assert "preset=table2" in lines


def test_comparison_table(tmp_path, poisson_report):
    path = tmp_path / "table.csv"
    reports = {"classical": poisson_report}
    write_table((("classical", "l2"), ("classical", "h1_semi")), reports, str(path))
    rows = _read(path)
    assert rows[0] == [
        "n_or_h",
        "classical_l2",
        "classical_l2_order",
        "classical_h1_semi",
        "classical_h1_semi_order",
    ]
    assert len(rows) == 3
