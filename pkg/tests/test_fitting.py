import math

import numpy as np
import pytest

from harness.fitting import locate_crossing, loglog_fit, quadratic_prefactor


def test_loglog_fit_recovers_power_law():
    n = np.array([100, 200, 400, 800, 1600])
    fit = loglog_fit(n, 0.08 * n ** 2.0)
    assert fit.slope == pytest.approx(2.0)
    assert fit.prefactor == pytest.approx(0.08)
    assert fit.n_points == 5


def test_loglog_fit_drops_unusable_points():
    fit = loglog_fit([1, 2, 4, 8], [2.0, 0.0, 8.0, float('nan')])
    assert fit.n_points == 2
    assert fit.slope == pytest.approx(1.0)
    assert math.isnan(fit.slope_stderr)


def test_loglog_fit_rejects_degenerate_input():
    with pytest.raises(ValueError):
        loglog_fit([5, 5, 5], [1, 2, 3])
    with pytest.raises(ValueError):
        loglog_fit([1, 2, 3], [1, 2, 3], min_points=4)
    with pytest.raises(ValueError):
        loglog_fit([1, 2], [1, 2, 3])


def test_quadratic_prefactor():
    n = np.array([50, 100, 200])
    assert quadratic_prefactor(n, 0.08 * n ** 2) == pytest.approx(0.08)
    with pytest.raises(ValueError):
        quadratic_prefactor([1.0], [float('nan')])


def test_single_crossing_is_interpolated():
    crossing = locate_crossing([1, 2, 3, 4], [0.5, 0.4, 0.1, 0.0], 0.25)
    assert crossing.x == pytest.approx(2.5)
    assert crossing.n_crossings == 1
    assert crossing.monotone


def test_unsorted_input_is_sorted_first():
    assert locate_crossing([4, 3, 2, 1], [0.0, 0.1, 0.4, 0.5], 0.25).x == pytest.approx(2.5)


def test_non_monotone_curve_reports_first_crossing():
    crossing = locate_crossing([1, 2, 3, 4], [0.5, 0.1, 0.5, 0.1], 0.25)
    assert crossing.x == pytest.approx(1.625)
    assert crossing.n_crossings == 3
    assert not crossing.monotone


def test_run_at_level_counts_once():
    crossing = locate_crossing([1, 2, 3, 4], [0.5, 0.25, 0.25, 0.1], 0.25)
    assert crossing.x == 2.0
    assert crossing.n_crossings == 1


def test_touching_level_is_not_a_crossing():
    crossing = locate_crossing([1, 2, 3], [0.5, 0.25, 0.5], 0.25)
    assert math.isnan(crossing.x)
    assert crossing.n_crossings == 0


def test_curve_ending_on_level_is_not_a_crossing():
    crossing = locate_crossing([1, 2, 3], [0.5, 0.4, 0.25], 0.25)
    assert math.isnan(crossing.x)
    assert crossing.n_crossings == 0


def test_nan_points_are_skipped():
    assert locate_crossing([1, 2, 3, 4], [0.5, float('nan'), 0.0, 0.0], 0.25).x == pytest.approx(2.0)
