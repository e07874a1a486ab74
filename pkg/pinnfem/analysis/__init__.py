from pinnfem.analysis.fields import field_dump
from pinnfem.analysis.norms import ErrorTriple, error_norms
from pinnfem.analysis.report import write_metadata, write_report
from pinnfem.analysis.study import (
    ConvergenceReport,
    ConvergenceRow,
    SpaceConfig,
    convergence_study,
    order_between,
)
