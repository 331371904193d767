"""Per-product parameters and the classical closed-form inventory formulas:
lead-time demand spread, safety stock, reorder point, economic order
quantity, and the annual ordering-plus-holding cost curve.

Two holding-cost parameters coexist on purpose.  The flat currency/unit/year
figure drives the EOQ and annual-cost formulas; the annual rate (fraction of
unit purchase cost) drives the day-by-day holding charge inside the
simulator.  They are calibrated differently in practice and must not be
conflated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .special import normal_quantile

__all__ = [
    "ProductSpec",
    "DemandStats",
    "InventoryPolicy",
    "round_half_up",
    "normal_quantile",
    "lead_time_sigma",
    "safety_stock",
    "reorder_point",
    "eoq",
    "total_annual_cost",
]


def round_half_up(x: float) -> int:
    """Round to the nearest integer with halves going up (not banker's)."""
    return math.floor(x + 0.5)


@dataclass(frozen=True)
class ProductSpec:
    """Static per-product parameters.

    holding_cost_flat is currency per unit per year and feeds the EOQ /
    annual-cost formulas; holding_rate_annual is a fraction of purchase_cost
    per unit per year and feeds the simulator's daily holding charge.
    """

    product_id: str
    purchase_cost: float
    lead_time_days: int
    selling_price: float
    starting_stock: int
    order_cost: float
    holding_cost_flat: float
    holding_rate_annual: float = 0.20

    def __post_init__(self):
        if not self.product_id:
            raise DomainError("product_id must be nonempty")
        for name in ("purchase_cost", "selling_price", "order_cost",
                     "holding_cost_flat", "holding_rate_annual"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be >= 0")
        if self.lead_time_days < 1:
            raise DomainError("lead_time_days must be >= 1")
        if self.starting_stock < 0:
            raise DomainError("starting_stock must be >= 0")


@dataclass(frozen=True)
class DemandStats:
    """Empirical summary of a daily sales series (zeros included)."""

    mean_daily: float
    std_daily: float
    prob_demand_day: float
    total_annual_demand: float
    max_daily: float
    demand_lead: int

    def __post_init__(self):
        if self.std_daily < 0:
            raise DomainError("std_daily must be >= 0")
        if not (0.0 <= self.prob_demand_day <= 1.0):
            raise DomainError("prob_demand_day must be in [0, 1]")
        if self.total_annual_demand < 0:
            raise DomainError("total_annual_demand must be >= 0")


@dataclass(frozen=True)
class InventoryPolicy:
    """A continuous-review (reorder point, order quantity) policy."""

    safety_stock: int
    reorder_point: int
    order_quantity: int
    service_level: float = 0.95

    def __post_init__(self):
        if self.safety_stock < 0:
            raise DomainError("safety_stock must be >= 0")
        if self.order_quantity <= 0:
            raise DomainError("order_quantity must be > 0")
        if not (0.0 < self.service_level < 1.0):
            raise DomainError("service_level must be in (0, 1)")


def lead_time_sigma(std_daily: float, lead_time_days: int) -> float:
    """Standard deviation of total demand over the lead time."""
    if std_daily < 0:
        raise DomainError("std_daily must be >= 0")
    if lead_time_days < 1:
        raise DomainError("lead_time_days must be >= 1")
    return std_daily * math.sqrt(lead_time_days)


def safety_stock(std_daily: float, lead_time_days: int, service_level: float) -> int:
    """Buffer units covering lead-time demand variability at the service level."""
    z = normal_quantile(service_level)
    return round_half_up(z * lead_time_sigma(std_daily, lead_time_days))


def reorder_point(mean_daily: float, lead_time_days: int, safety_stock: int) -> int:
    """Expected lead-time demand plus safety stock."""
    if mean_daily < 0:
        raise DomainError("mean_daily must be >= 0")
    if lead_time_days < 1:
        raise DomainError("lead_time_days must be >= 1")
    if safety_stock < 0:
        raise DomainError("safety_stock must be >= 0")
    return round_half_up(mean_daily * lead_time_days) + safety_stock


def eoq(annual_demand: float, order_cost: float, holding_cost_flat: float) -> int:
    """Order quantity minimizing annual ordering plus holding cost."""
    if annual_demand < 0 or order_cost < 0:
        raise DomainError("annual_demand and order_cost must be >= 0")
    if holding_cost_flat <= 0:
        raise DomainError("holding_cost_flat must be > 0")
    return round_half_up(math.sqrt(2.0 * annual_demand * order_cost / holding_cost_flat))


def total_annual_cost(annual_demand: float, q: float, order_cost: float,
                      holding_cost_flat: float) -> float:
    """Annual ordering cost plus annual holding cost at order quantity q."""
    if q <= 0:
        raise DomainError("order quantity must be > 0")
    return (annual_demand / q) * order_cost + (q / 2.0) * holding_cost_flat
