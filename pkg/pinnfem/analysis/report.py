"""CSV reports of convergence studies."""

import csv
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from pinnfem.analysis.study import ConvergenceReport, ConvergenceRow
from pinnfem.logger import logger

BASE_COLUMNS = ("l2", "h1", "h1_semi")


def format_float(value: Optional[float]) -> str:
    """Six significant digits; empty for missing values."""
    return "" if value is None else f"{value:.5e}"


def format_mesh_parameter(row: ConvergenceRow) -> str:
    if row.dim == 1:
        return str(row.mesh_size)
    return f"1/{row.mesh_size}"


def report_columns(report: ConvergenceReport) -> List[str]:
    norms = list(BASE_COLUMNS) + (["h2"] if report.has_h2 else [])
    header = ["n_or_h"]
    for norm in norms:
        header += [norm, f"{norm}_order"]
    return header


def report_rows(report: ConvergenceReport) -> List[List[str]]:
    norms = list(BASE_COLUMNS) + (["h2"] if report.has_h2 else [])
    rows = []
    for row in report.rows:
        cells = [format_mesh_parameter(row)]
        for norm in norms:
            cells += [format_float(row.error(norm)), format_float(row.orders.get(norm))]
        rows.append(cells)
    return rows


def _write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as out_file:
        writer = csv.writer(out_file, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    logger.info("Wrote %s", path)


def write_report(report: ConvergenceReport, path: str) -> None:
    """``n_or_h,l2,l2_order,h1,h1_order,h1_semi,h1_semi_order[,h2,h2_order]``."""
    _write_csv(path, report_columns(report), report_rows(report))


def report_metadata(report: ConvergenceReport, extra: Optional[Dict[str, str]] = None):
    config = report.space
    metadata = {
        "problem": report.problem_id,
        "space": config.space,
        "element": config.element,
        "degree": str(config.degree),
        "seed": "" if report.seed is None else str(report.seed),
    }
    for key, value in sorted(report.pinn.items()):
        metadata[f"pinn.{key}"] = format_float(value)
    for row in report.rows:
        prefix = f"row.{row.mesh_size}"
        metadata[f"{prefix}.status"] = row.status
        metadata[f"{prefix}.residual"] = format_float(row.residual)
        metadata[f"{prefix}.condition"] = format_float(row.condition_estimate)
        if row.shift is not None:
            metadata[f"{prefix}.shift"] = format_float(row.shift)
    metadata.update(extra or {})
    return metadata


def write_metadata(
    report: ConvergenceReport, path: str, extra: Optional[Dict[str, str]] = None
) -> None:
    """``key=value`` lines describing a report."""
    with open(path, "w", encoding="utf-8", newline="\n") as out_file:
        for key, value in report_metadata(report, extra).items():
            out_file.write(f"{key}={value}\n")
    logger.info("Wrote %s", path)


TableColumn = Tuple[str, str]
"""(space, norm) pair of a comparison table."""


def table_rows(
    columns: Sequence[TableColumn], reports: Dict[str, ConvergenceReport]
) -> Tuple[List[str], List[List[str]]]:
    """
    Side-by-side comparison of several spaces: one error and one order
    column per (space, norm) pair, rows by mesh size.
    """
    header = ["n_or_h"]
    for space, norm in columns:
        header += [f"{space}_{norm}", f"{space}_{norm}_order"]
    first = reports[columns[0][0]]
    rows = []
    for index, mesh_row in enumerate(first.rows):
        cells = [format_mesh_parameter(mesh_row)]
        for space, norm in columns:
            row = reports[space].rows[index]
            cells += [format_float(row.error(norm)), format_float(row.orders.get(norm))]
        rows.append(cells)
    return header, rows


def write_table(
    columns: Sequence[TableColumn], reports: Dict[str, ConvergenceReport], path: str
) -> None:
    header, rows = table_rows(columns, reports)
    _write_csv(path, header, rows)
