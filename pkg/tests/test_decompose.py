"""Seasonal-trend decomposition: exact reconstruction, recovery of known
structure from synthetic signals, and input validation."""

import numpy as np
import pytest

from invopt import Decomposition, DomainError, SalesSeries, decompose


def reconstruction_error(d: Decomposition) -> float:
    return float(np.max(np.abs(d.observed - (d.trend + d.seasonal + d.residual))))


class TestReconstruction:
    def test_exact_for_noisy_series(self):
        rng = np.random.default_rng(42)
        y = 50 + 0.1 * np.arange(300) + 5 * np.sin(np.arange(300) * 2 * np.pi / 30)
        y = y + rng.normal(0, 2, size=300)
        d = decompose(y, period=30)
        assert reconstruction_error(d) < 1e-9

    def test_exact_for_integer_sales(self):
        rng = np.random.default_rng(7)
        series = SalesSeries("X", rng.integers(0, 40, size=365))
        d = decompose(series, period=30)
        assert reconstruction_error(d) < 1e-9
        assert np.array_equal(d.observed, series.quantities.astype(float))

    def test_exact_without_robustness(self):
        rng = np.random.default_rng(3)
        y = rng.normal(100, 10, size=220)
        d = decompose(y, period=30, robustness_iters=0)
        assert reconstruction_error(d) < 1e-9


class TestStructureRecovery:
    def test_pure_sinusoid_lands_in_seasonal(self):
        t = np.arange(360, dtype=float)
        y = 100 + 10 * np.sin(2 * np.pi * t / 30)
        d = decompose(y, period=30)
        signal_rms = float(np.sqrt(np.mean((y - y.mean()) ** 2)))
        resid_rms = float(np.sqrt(np.mean(d.residual ** 2)))
        assert resid_rms / signal_rms < 0.05

    def test_linear_trend_leaves_no_seasonal(self):
        t = np.arange(360, dtype=float)
        y = 5 + 0.5 * t
        d = decompose(y, period=30)
        trend_rms = float(np.sqrt(np.mean((y - y.mean()) ** 2)))
        seasonal_rms = float(np.sqrt(np.mean(d.seasonal ** 2)))
        assert seasonal_rms / trend_rms < 0.05

    def test_constant_series(self):
        d = decompose(np.full(120, 37.0), period=30)
        assert np.max(np.abs(d.trend - 37.0)) < 1e-6
        assert np.max(np.abs(d.seasonal)) < 1e-6
        assert np.max(np.abs(d.residual)) < 1e-6

    def test_seasonal_component_roughly_balances(self):
        t = np.arange(420, dtype=float)
        y = 80 + 12 * np.cos(2 * np.pi * t / 30) + 0.05 * t
        d = decompose(y, period=30)
        # Each full cycle of the seasonal component should nearly cancel.
        for start in range(0, 420 - 30, 30):
            cycle_mean = d.seasonal[start:start + 30].mean()
            assert abs(cycle_mean) < 0.5

    def test_weekly_period(self):
        t = np.arange(140, dtype=float)
        y = 20 + 4 * np.sin(2 * np.pi * t / 7)
        d = decompose(y, period=7)
        resid_rms = float(np.sqrt(np.mean(d.residual ** 2)))
        assert resid_rms < 0.5


class TestValidation:
    def test_period_too_small(self):
        with pytest.raises(DomainError):
            decompose(np.arange(100.0), period=1)

    def test_series_too_short(self):
        with pytest.raises(DomainError):
            decompose(np.arange(59.0), period=30)

    def test_non_finite(self):
        y = np.arange(120.0)
        y[5] = np.nan
        with pytest.raises(DomainError):
            decompose(y, period=30)

    def test_negative_robustness_iters(self):
        with pytest.raises(DomainError):
            decompose(np.arange(120.0), period=30, robustness_iters=-1)

    def test_result_shape_and_period(self):
        d = decompose(np.arange(90.0) % 13, period=30)
        assert d.period == 30
        assert d.observed.shape == d.trend.shape == (90,)
