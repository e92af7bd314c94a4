"""Tests for the one-dimensional infimum search."""

import math

import numpy as np
import pytest

from lsqbounds.optimize import NoFinitePointError, infimum_1d


class TestInfimum1d:
    def test_analytic_quadratic(self):
        res = infimum_1d(lambda s: (s - 0.3) ** 2 + 1.0, 0.0, 1.0)
        assert res.value == pytest.approx(1.0, abs=1e-9)
        assert res.argmin == pytest.approx(0.3, abs=1e-5)

    def test_minimum_many_decades_below_width(self):
        # argmin at 1e-6 on (0, 1); the log-spaced scan must bracket it
        res = infimum_1d(lambda s: (np.log(s) - np.log(1e-6)) ** 2, 0.0, 1.0)
        assert res.argmin == pytest.approx(1e-6, rel=1e-3)

    def test_scalar_only_objective(self):
        # math.exp rejects arrays, forcing the scalar scan fallback
        res = infimum_1d(lambda s: math.exp(s) - 2.0 * s, 0.0, 2.0)
        assert res.argmin == pytest.approx(math.log(2.0), abs=1e-5)

    def test_all_infeasible(self):
        with pytest.raises(NoFinitePointError):
            infimum_1d(lambda s: np.full_like(np.asarray(s, dtype=float), np.inf), 0.0, 1.0)

    def test_nan_treated_as_infeasible(self):
        res = infimum_1d(
            lambda s: np.where(np.asarray(s) < 0.5, np.nan, (np.asarray(s) - 0.7) ** 2),
            0.0,
            1.0,
        )
        assert res.argmin == pytest.approx(0.7, abs=1e-4)

    def test_upper_bounds_objective_at_random_points(self):
        rng = np.random.default_rng(42)
        objective = lambda s: (np.asarray(s) - 0.3) ** 2 + np.sin(5 * np.asarray(s)) * 0.1 + 1.0
        res = infimum_1d(objective, 0.0, 1.0)
        points = rng.uniform(1e-9, 1.0 - 1e-9, 100)
        assert np.all(res.value <= objective(points) + 1e-12)

    def test_empty_interval_rejected(self):
        with pytest.raises(ValueError):
            infimum_1d(lambda s: s, 1.0, 1.0)

    def test_deterministic(self):
        f = lambda s: (np.asarray(s) - 0.25) ** 4 + 2.0
        assert infimum_1d(f, 0.0, 1.0) == infimum_1d(f, 0.0, 1.0)
