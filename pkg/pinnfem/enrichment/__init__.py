from pinnfem.enrichment.shift import (
    EnrichmentPlan,
    ZeroPointReport,
    compute_shift,
    zero_point_certificate,
)
from pinnfem.enrichment.solvers import (
    EnrichedSolution,
    evaluate_enriched,
    solve_additive,
    solve_multiplicative,
)
