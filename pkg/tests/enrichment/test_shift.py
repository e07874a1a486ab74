import pytest

from pinnfem.enrichment import EnrichmentPlan, compute_shift, zero_point_certificate
from pinnfem.enrichment.shift import SAMPLE_CAP, check_margin, sample_grid
from pinnfem.errors import InputError, ShiftError
from pinnfem.pinn import get_problem
from tests.utils import sine_field


def test_sample_grid_includes_boundary():
    grid = sample_grid(2, 5)
    assert grid.shape == (25, 2)
    assert grid.min() == 0.0
    assert grid.max() == 1.0


def test_sample_grid_is_capped():
    assert sample_grid(3, 1000).shape[0] <= SAMPLE_CAP
    with pytest.raises(InputError):
        sample_grid(1, 1)


def test_shift_of_sine():
    # min of sin(πx) sin(πy) on the grid is 0 (on the boundary)
    problem = get_problem("p2d_c0")
    assert compute_shift(sine_field, problem, margin=0.5) == pytest.approx(0.5)
    assert compute_shift(lambda x: sine_field(x) + 3.0, problem) == 0.0


def test_shift_of_negative_field():
    problem = get_problem("p1d_poisson")
    shift = compute_shift(lambda x: sine_field(x) - 2.0, problem, margin=0.25)
    assert shift == pytest.approx(2.25)


def test_margin_check():
    problem = get_problem("p2d_c0")
    check_margin(EnrichmentPlan("multiplicative", sine_field, 0.5, 0.5), problem.dim)
    with pytest.raises(ShiftError):
        check_margin(EnrichmentPlan("multiplicative", sine_field, 0.1, 0.5), problem.dim)


def test_plan_mode():
    with pytest.raises(InputError):
        EnrichmentPlan("classical", sine_field)


def test_zero_point_certificate():
    problem = get_problem("p2d_c0")
    report = zero_point_certificate(sine_field, problem)
    assert report.has_zero_points
    assert report.minimum_abs == pytest.approx(0.0, abs=1e-15)
    assert report.near_boundary
    # u = 2 wherever sin(πx) sin(πy) vanishes on the boundary
    assert report.linf_lower_bound == pytest.approx(2.0)


def test_no_zero_points():
    problem = get_problem("p1d_poisson")
    report = zero_point_certificate(problem.exact_u, problem)
    assert not report.has_zero_points
    assert report.linf_lower_bound is None
    assert report.minimum_abs > 1.5
