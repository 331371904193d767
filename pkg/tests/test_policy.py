"""Classical formulas: safety stock, reorder point, order quantity, and the
annual cost model, including the four-product reference portfolio."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from invopt import (
    DomainError,
    ProductSpec,
    eoq,
    reorder_point,
    round_half_up,
    safety_stock,
    total_annual_cost,
)
from tests.conftest import REFERENCE_PORTFOLIO, product_spec


class TestRoundHalfUp:
    @pytest.mark.parametrize("x,expected", [
        (0.5, 1), (1.5, 2), (2.5, 3), (-0.5, 0), (-1.5, -1),
        (2.4999, 2), (2.5001, 3), (7.0, 7),
    ])
    def test_half_rounds_up(self, x, expected):
        assert round_half_up(x) == expected


class TestSafetyStock:
    def test_reference_value(self):
        assert safety_stock(26.48, 6, 0.95) == 107

    def test_zero_sigma(self):
        assert safety_stock(0.0, 6, 0.95) == 0

    def test_portfolio_computed_values(self):
        # Computed from the stated stats; three of four differ from the
        # reported figures, which is expected (see acceptance tests).
        computed = {
            pid: safety_stock(entry["stats"]["std_daily"],
                              entry["spec"]["lead_time_days"], 0.95)
            for pid, entry in REFERENCE_PORTFOLIO.items()
        }
        assert computed["B"] == REFERENCE_PORTFOLIO["B"]["reported"]["safety_stock"]

    @given(st.floats(min_value=0.01, max_value=500),
           st.integers(min_value=1, max_value=60))
    @settings(max_examples=100, deadline=None)
    def test_monotone_in_service_level(self, sigma, lt):
        assert (safety_stock(sigma, lt, 0.90)
                <= safety_stock(sigma, lt, 0.95)
                <= safety_stock(sigma, lt, 0.99))

    @given(st.floats(min_value=0.01, max_value=500),
           st.integers(min_value=1, max_value=59))
    @settings(max_examples=100, deadline=None)
    def test_monotone_in_lead_time(self, sigma, lt):
        assert safety_stock(sigma, lt, 0.95) <= safety_stock(sigma, lt + 1, 0.95)

    def test_oracle_formula(self):
        # Independent recomputation with library constants.
        import scipy.stats
        z = float(scipy.stats.norm.ppf(0.95))
        assert safety_stock(26.48, 6, 0.95) == math.floor(
            z * 26.48 * math.sqrt(6) + 0.5)

    def test_invalid(self):
        with pytest.raises(DomainError):
            safety_stock(-1.0, 6, 0.95)
        with pytest.raises(DomainError):
            safety_stock(5.0, 0, 0.95)
        with pytest.raises(DomainError):
            safety_stock(5.0, 6, 1.0)


class TestReorderPoint:
    def test_reference_value(self):
        assert reorder_point(648.55, 6, 107) == 3998

    def test_zero_demand(self):
        assert reorder_point(0.0, 6, 50) == 50

    @given(st.floats(min_value=0, max_value=2000),
           st.integers(min_value=1, max_value=30),
           st.integers(min_value=0, max_value=500))
    @settings(max_examples=100, deadline=None)
    def test_decomposes_into_lead_demand_plus_buffer(self, mu, lt, ss):
        assert reorder_point(mu, lt, ss) == round_half_up(mu * lt) + ss


class TestEoq:
    def test_reference_portfolio(self):
        for pid, entry in REFERENCE_PORTFOLIO.items():
            spec = product_spec(pid)
            annual = entry["stats"]["total_annual_demand"]
            assert eoq(annual, spec.order_cost, 20.0) == entry["reported"]["eoq"], pid

    def test_oracle_formula(self):
        assert eoq(28670, 1000, 20.0) == round_half_up(
            math.sqrt(2 * 28670 * 1000 / 20.0))

    @given(st.integers(min_value=100, max_value=500_000),
           st.floats(min_value=10, max_value=5000))
    @settings(max_examples=100, deadline=None)
    def test_monotone_in_demand(self, demand, oc):
        assert eoq(demand, oc, 20.0) <= eoq(demand + 100, oc, 20.0)

    @given(st.integers(min_value=10_000, max_value=500_000),
           st.floats(min_value=100, max_value=5000),
           st.floats(min_value=5, max_value=100))
    @settings(max_examples=100, deadline=None)
    def test_minimizes_annual_cost(self, demand, oc, hc):
        # The rounded optimum must beat its integer neighbors.
        def cost(q: int) -> float:
            return demand / q * oc + q / 2 * hc

        q_star = eoq(demand, oc, hc)
        assert cost(q_star) <= cost(q_star - 1) + 1e-9
        assert cost(q_star) <= cost(q_star + 1) + 1e-9

    def test_invalid(self):
        with pytest.raises(DomainError):
            eoq(-1, 1000, 20.0)
        with pytest.raises(DomainError):
            eoq(1000, -1, 20.0)
        with pytest.raises(DomainError):
            eoq(1000, 1000, 0.0)

    def test_zero_demand_gives_zero(self):
        assert eoq(0, 1000, 20.0) == 0


class TestTotalAnnualCost:
    def test_oracle_formula(self):
        got = total_annual_cost(28670, 1693, 1000, 20.0)
        assert got == pytest.approx(28670 / 1693 * 1000 + 1693 / 2 * 20.0)

    def test_eoq_balances_components(self):
        # At the optimum, ordering and holding components nearly coincide.
        q = eoq(237370, 1200, 20.0)
        ordering = 237370 / q * 1200
        holding = q / 2 * 20.0
        assert abs(ordering - holding) / holding < 0.001

    def test_invalid(self):
        with pytest.raises(DomainError):
            total_annual_cost(1000, 0, 1000, 20.0)


class TestProductSpec:
    def test_defaults_and_validation(self):
        spec = product_spec("A")
        assert spec.holding_rate_annual == pytest.approx(0.20)
        base = dict(product_id="X", purchase_cost=1.0, lead_time_days=3,
                    selling_price=2.0, starting_stock=100, order_cost=10.0,
                    holding_cost_flat=20.0)
        with pytest.raises(DomainError):
            ProductSpec(**{**base, "lead_time_days": 0})
        with pytest.raises(DomainError):
            ProductSpec(**{**base, "purchase_cost": -1.0})
        with pytest.raises(DomainError):
            ProductSpec(**{**base, "starting_stock": -5})
