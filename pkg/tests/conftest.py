"""Shared fixtures: the four-product reference portfolio and its externally
reported statistics, used across the suite as known-good inputs."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from invopt import DemandStats, ProductSpec

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"
PORTFOLIO_CONFIG = CONFIG_DIR / "products.json"
GRID_RESULTS_CSV = CONFIG_DIR / "results_grid.csv"
BAYES_RESULTS_CSV = CONFIG_DIR / "results_bayes.csv"

# The reference portfolio: per-product economics, demand statistics, and the
# externally reported policy values shipped in configs/products.json.
REFERENCE_PORTFOLIO = {
    "A": {
        "spec": dict(product_id="A", purchase_cost=12, lead_time_days=9,
                     selling_price=16.10, starting_stock=2750,
                     order_cost=1000, holding_cost_flat=20),
        "stats": dict(mean_daily=78.33, std_daily=55.08, prob_demand_day=0.76,
                      total_annual_demand=28670, max_daily=214,
                      demand_lead=705),
        "reported": dict(safety_stock=185, reorder_point=1116, eoq=1693),
    },
    "B": {
        "spec": dict(product_id="B", purchase_cost=7, lead_time_days=6,
                     selling_price=8.60, starting_stock=22500,
                     order_cost=1200, holding_cost_flat=20),
        "stats": dict(mean_daily=648.55, std_daily=26.48, prob_demand_day=1.0,
                      total_annual_demand=237370, max_daily=718,
                      demand_lead=3891),
        "reported": dict(safety_stock=107, reorder_point=3998, eoq=5337),
    },
    "C": {
        "spec": dict(product_id="C", purchase_cost=6, lead_time_days=15,
                     selling_price=10.20, starting_stock=5200,
                     order_cost=1000, holding_cost_flat=20),
        "stats": dict(mean_daily=141.61, std_daily=95.96, prob_demand_day=0.70,
                      total_annual_demand=51831, max_daily=267,
                      demand_lead=2266),
        "reported": dict(safety_stock=199, reorder_point=3224, eoq=2277),
    },
    "D": {
        "spec": dict(product_id="D", purchase_cost=37, lead_time_days=12,
                     selling_price=68.00, starting_stock=1400,
                     order_cost=1200, holding_cost_flat=20),
        "stats": dict(mean_daily=35.67, std_daily=63.98, prob_demand_day=0.23,
                      total_annual_demand=13056, max_daily=156,
                      demand_lead=785),
        "reported": dict(safety_stock=18, reorder_point=1819, eoq=1252),
    },
}

# Two externally reported optimization result sets over the same portfolio
# (also shipped as configs/results_grid.csv and configs/results_bayes.csv).
REPORTED_GRID_RESULTS = {
    "q": [2197, 7358, 2688, 1585],
    "mean_profit": [417804, 1237303, 466946, 818974],
    "profit_std": [16951, 1323, 17895, 83393],
    "mean_lost_orders": [0.14, 0.38, 0.36, 0.21],
}
REPORTED_BAYES_RESULTS = {
    "q": [2264, 9999, 2782, 1459],
    "mean_profit": [416933, 1484243, 467910, 823116],
    "profit_std": [17207, 1327, 17891, 81231],
    "mean_lost_orders": [0.07, 0.26, 0.24, 0.18],
}


def product_spec(pid: str) -> ProductSpec:
    return ProductSpec(**REFERENCE_PORTFOLIO[pid]["spec"])


def demand_stats(pid: str) -> DemandStats:
    return DemandStats(**REFERENCE_PORTFOLIO[pid]["stats"])


@pytest.fixture
def portfolio():
    return {pid: (product_spec(pid), demand_stats(pid))
            for pid in REFERENCE_PORTFOLIO}


@pytest.fixture
def portfolio_config_path() -> Path:
    assert PORTFOLIO_CONFIG.exists()
    return PORTFOLIO_CONFIG


@pytest.fixture
def small_config(tmp_path) -> Path:
    """Portfolio config scaled down for fast end-to-end runs."""
    with open(PORTFOLIO_CONFIG, "r", encoding="utf-8") as handle:
        raw = json.load(handle)
    raw["simulation"]["replications"] = 60
    raw["bayesopt"]["n_iterations"] = 4
    path = tmp_path / "small.json"
    path.write_text(json.dumps(raw), encoding="utf-8")
    return path
