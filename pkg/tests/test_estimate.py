import numpy as np
import pytest

from app.errors import EstimateError
from app.estimate import (
    LOWER_FLOOR,
    default_gamma_grid,
    default_tail_start,
    estimate_series,
    fit_intercept,
    lower_estimate,
)
from app.krylov import run_krylov


def synthetic(gamma, n=400, intercept=0.3, amplitude=0.2, noise=None):
    k = np.arange(n + 1, dtype=float)
    values = np.ones(n + 1)
    values[1:] = intercept + amplitude * k[1:] ** -gamma
    if noise is not None:
        values[1:] += noise
    return values


def test_default_grid_is_exact_decimals():
    grid = default_gamma_grid()
    assert len(grid) == 39
    assert grid[0] == 0.1
    assert grid[-1] == 2.0
    assert 0.35 in grid


@pytest.mark.parametrize("gamma", [0.5, 1.0, 1.5])
def test_fit_recovers_exact_power_law(gamma):
    fit = fit_intercept(synthetic(gamma), tail_start=1)
    assert fit.gamma == gamma
    assert fit.intercept_y == pytest.approx(0.3, abs=1e-9)
    assert fit.slope == pytest.approx(0.2, abs=1e-9)
    assert fit.points == 400
    assert fit.l_lower == pytest.approx(0.3, abs=1e-6)


@pytest.mark.parametrize("gamma", [0.5, 1.0, 1.5])
def test_fit_is_stable_under_small_noise(gamma):
    rng = np.random.default_rng(2024)
    fit = fit_intercept(synthetic(gamma, noise=rng.normal(0.0, 1e-4, size=400)), tail_start=1)
    assert fit.intercept_y == pytest.approx(0.3, abs=0.01)


def test_constant_series_is_its_own_limit():
    fit = fit_intercept(np.full(41, 0.5))
    assert fit.intercept_y == pytest.approx(0.5, abs=1e-12)
    assert fit.sse == pytest.approx(0.0, abs=1e-20)
    # every gamma fits equally well; ties go to the smallest
    assert fit.gamma == 0.1


def test_default_tail_is_latter_half():
    values = synthetic(1.0, n=100)
    assert default_tail_start(values) == 50
    fit = fit_intercept(values)
    assert fit.tail_start == 50
    assert fit.points == 51


def test_candidates_cover_the_grid():
    grid = default_gamma_grid(0.5, 1.0, 0.25)
    fit = fit_intercept(synthetic(0.75), grid, tail_start=10)
    assert [g for g, _ in fit.candidates] == [0.5, 0.75, 1.0]
    assert min(fit.candidates, key=lambda c: c[1])[0] == 0.75


def test_lower_estimate_is_floored():
    values = np.linspace(1.0, 0.0, 21)
    assert lower_estimate(values, 2.0, tail_start=1) >= LOWER_FLOOR
    steep = np.array([1.0, 1.0, 0.9, 0.0, -5.0])
    assert lower_estimate(steep, 0.1, tail_start=1) == LOWER_FLOOR


def test_lower_estimate_takes_the_smallest_secant():
    values = np.array([1.0, 1.0, 0.8, 0.7, 0.65, 0.6])
    x = np.arange(len(values), dtype=float) ** -1.0
    expected = min(
        values[k] - (values[k + 1] - values[k]) / (x[k + 1] - x[k]) * x[k]
        for k in range(2, len(values) - 1)
    )
    assert lower_estimate(values, 1.0, tail_start=2) == pytest.approx(expected)


def test_short_series_is_rejected():
    with pytest.raises(EstimateError):
        fit_intercept([1.0, 1.0, 0.9], tail_start=1)
    with pytest.raises(EstimateError):
        lower_estimate([1.0, 1.0], 1.0, tail_start=1)


def test_non_positive_gamma_is_rejected():
    with pytest.raises(EstimateError):
        fit_intercept(synthetic(1.0, n=20), [0.0, 0.5])
    with pytest.raises(EstimateError):
        lower_estimate(synthetic(1.0, n=20), -1.0)
    with pytest.raises(EstimateError):
        default_gamma_grid(0.0, 1.0, 0.1)


def test_estimate_series_uses_separate_secant_range():
    values = synthetic(1.0, n=60)
    full = estimate_series(values, tail_start=30)
    wide = estimate_series(values, tail_start=30, lower_tail_start=1)
    assert wide.intercept_y == full.intercept_y
    assert wide.l_lower == pytest.approx(lower_estimate(values, full.gamma, 1))


def test_fit_accepts_distance_series(disordered_field):
    series = run_krylov(disordered_field, 40)
    fit = estimate_series(series)
    assert fit.tail_start == 20
    assert -1.0 <= fit.l_lower <= 1.0
    assert np.isfinite(fit.intercept_y)
