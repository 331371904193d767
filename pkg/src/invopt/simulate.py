"""Day-by-day continuous-review (ROP, Q) inventory simulation.

One vectorized engine drives everything: state is carried in integer arrays
with one row per replication, and the day loop applies the same update to
all rows at once. Single-replication runs with a full per-day ledger and
thousand-replication Monte Carlo batches therefore share one code path, so
parallel and sequential evaluation cannot drift apart.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .demand import DemandModel, ModelKind, sample_demand_series
from .errors import DomainError
from .policy import InventoryPolicy, ProductSpec
from .seeding import derive_rng

__all__ = [
    "SimulationConfig",
    "DayRecord",
    "SimulationLedger",
    "ReplicationResult",
    "SimulationSummary",
    "GridSearchResult",
    "simulate_replication",
    "run_monte_carlo",
    "grid_search",
    "demand_matrix",
    "summaries_from_demand",
]


@dataclass(frozen=True)
class SimulationConfig:
    horizon_days: int = 365
    replications: int = 1000
    seed: int = 0
    demand_model_kind: ModelKind = "plain_normal"
    fill_rate_floor: float = 0.95

    def __post_init__(self):
        if self.horizon_days < 1:
            raise DomainError("horizon_days must be >= 1")
        if self.replications < 1:
            raise DomainError("replications must be >= 1")
        if not (0.0 <= self.fill_rate_floor <= 1.0):
            raise DomainError("fill_rate_floor must be in [0, 1]")


@dataclass(frozen=True)
class DayRecord:
    """State of one simulated day, recorded after all of the day's events."""

    day: int
    demand: int
    units_sold: int
    lost: int
    units_received: int
    order_placed: bool
    on_hand: int
    outstanding: tuple[tuple[int, int], ...]  # (arrival_day, quantity)


@dataclass(frozen=True)
class SimulationLedger:
    days: tuple[DayRecord, ...]


@dataclass(frozen=True)
class ReplicationResult:
    profit: float
    revenue: float
    purchase_cost_total: float
    order_cost_total: float
    holding_cost_total: float
    fill_rate: float
    lost_fraction: float


@dataclass(frozen=True)
class SimulationSummary:
    order_quantity: int
    mean_profit: float
    profit_std: float
    mean_lost_orders: float
    min_fill_rate: float
    mean_inventory: float


@dataclass(frozen=True)
class GridSearchResult:
    summaries: tuple[SimulationSummary, ...]
    incumbent: SimulationSummary
    feasible: bool


def _simulate_batch(spec: ProductSpec, policy: InventoryPolicy,
                    demand: np.ndarray, trace: bool = False):
    """Run every replication row of `demand` through the policy.

    Daily sequence: receive due orders, satisfy demand from on-hand stock
    (the shortfall is lost, not backordered), reorder Q units when the
    inventory position (on hand + on order) falls to the reorder point or
    below, then accrue holding cost on day-end stock. Purchase cost is
    charged when units arrive, so orders still in flight at the horizon
    cost nothing beyond their fixed order cost.
    """
    demand = np.asarray(demand, dtype=np.int64)
    n, horizon = demand.shape
    lt = spec.lead_time_days
    q = policy.order_quantity
    rop = policy.reorder_point

    on_hand = np.full(n, spec.starting_stock, dtype=np.int64)
    on_order = np.zeros(n, dtype=np.int64)
    arrivals = np.zeros((n, horizon), dtype=np.int64)
    sold_total = np.zeros(n, dtype=np.int64)
    lost_total = np.zeros(n, dtype=np.int64)
    received_total = np.zeros(n, dtype=np.int64)
    orders_placed = np.zeros(n, dtype=np.int64)
    on_hand_integral = np.zeros(n, dtype=np.int64)

    records: list[DayRecord] = []
    pending: list[tuple[int, int]] = []  # trace bookkeeping, (arrival_day, qty)

    for t in range(horizon):
        received = arrivals[:, t]
        on_hand += received
        on_order -= received
        received_total += received

        day_demand = demand[:, t]
        sold = np.minimum(day_demand, on_hand)
        on_hand -= sold
        sold_total += sold
        lost_total += day_demand - sold

        trigger = (on_hand + on_order) <= rop
        orders_placed += trigger
        on_order += np.where(trigger, q, 0)
        if t + lt < horizon:
            arrivals[:, t + lt] += np.where(trigger, q, 0)

        on_hand_integral += on_hand

        if trace:
            day = t + 1
            pending = [p for p in pending if p[0] != day]
            if trigger[0]:
                pending.append((day + lt, q))
            records.append(DayRecord(
                day=day, demand=int(day_demand[0]), units_sold=int(sold[0]),
                lost=int(day_demand[0] - sold[0]),
                units_received=int(received[0]), order_placed=bool(trigger[0]),
                on_hand=int(on_hand[0]), outstanding=tuple(pending)))

    daily_rate = spec.holding_rate_annual * spec.purchase_cost / 365.0
    revenue = spec.selling_price * sold_total.astype(float)
    purchase = spec.purchase_cost * received_total.astype(float)
    ordering = spec.order_cost * orders_placed.astype(float)
    holding = daily_rate * on_hand_integral.astype(float)
    profit = revenue - purchase - ordering - holding

    demand_totals = demand.sum(axis=1)
    fill = np.where(demand_totals > 0, sold_total / np.maximum(demand_totals, 1), 1.0)
    lost_frac = np.where(demand_totals > 0,
                         lost_total / np.maximum(demand_totals, 1), 0.0)

    batch = {
        "profit": profit, "revenue": revenue, "purchase": purchase,
        "ordering": ordering, "holding": holding, "fill_rate": fill,
        "lost_fraction": lost_frac,
        "mean_on_hand": on_hand_integral / float(horizon),
    }
    ledger = SimulationLedger(days=tuple(records)) if trace else None
    return batch, ledger


def simulate_replication(spec: ProductSpec, policy: InventoryPolicy,
                         model: DemandModel, horizon: int,
                         rng: np.random.Generator
                         ) -> tuple[SimulationLedger, ReplicationResult]:
    """One replication with a full per-day ledger."""
    if horizon < 1:
        raise DomainError("horizon must be >= 1")
    demand = sample_demand_series(model, horizon, rng).reshape(1, horizon)
    batch, ledger = _simulate_batch(spec, policy, demand, trace=True)
    result = ReplicationResult(
        profit=float(batch["profit"][0]),
        revenue=float(batch["revenue"][0]),
        purchase_cost_total=float(batch["purchase"][0]),
        order_cost_total=float(batch["ordering"][0]),
        holding_cost_total=float(batch["holding"][0]),
        fill_rate=float(batch["fill_rate"][0]),
        lost_fraction=float(batch["lost_fraction"][0]))
    return ledger, result


def demand_matrix(spec: ProductSpec, model: DemandModel,
                  config: SimulationConfig) -> np.ndarray:
    """Replication-by-day demand draws on substreams keyed by
    (seed, product_id, replication index), so any subset of replications
    sees the same numbers no matter who evaluates it or in what order.
    """
    rows = [sample_demand_series(model, config.horizon_days,
                                 derive_rng(config.seed, spec.product_id, i))
            for i in range(config.replications)]
    return np.stack(rows)


def _summarize_batch(order_quantity: int, batch: dict) -> SimulationSummary:
    profits = batch["profit"]
    std = float(profits.std(ddof=1)) if profits.size > 1 else 0.0
    return SimulationSummary(
        order_quantity=order_quantity,
        mean_profit=float(profits.mean()),
        profit_std=std,
        mean_lost_orders=float(batch["lost_fraction"].mean()),
        min_fill_rate=float(batch["fill_rate"].min()),
        mean_inventory=float(batch["mean_on_hand"].mean()))


def summaries_from_demand(spec: ProductSpec, policy: InventoryPolicy,
                          demand: np.ndarray,
                          order_quantities: Sequence[int]
                          ) -> list[SimulationSummary]:
    """Evaluate several order quantities against one fixed demand matrix
    (common random numbers), holding every other policy field constant."""
    out = []
    for q in order_quantities:
        batch, _ = _simulate_batch(spec, replace(policy, order_quantity=int(q)),
                                   demand)
        out.append(_summarize_batch(int(q), batch))
    return out


def run_monte_carlo(spec: ProductSpec, policy: InventoryPolicy,
                    model: DemandModel,
                    config: SimulationConfig) -> SimulationSummary:
    """Monte Carlo estimate of the policy's annual performance."""
    demand = demand_matrix(spec, model, config)
    batch, _ = _simulate_batch(spec, policy, demand)
    return _summarize_batch(policy.order_quantity, batch)


def grid_search(spec: ProductSpec, policy: InventoryPolicy, model: DemandModel,
                config: SimulationConfig, q_start: int, q_end: int,
                q_step: int = 10,
                enforce_fill_rate: bool = False) -> GridSearchResult:
    """Sweep order quantities q_start, q_start+q_step, ..., <= q_end.

    All grid points share one demand matrix. The incumbent maximizes mean
    profit, restricted to points meeting the fill-rate floor when
    enforce_fill_rate is set and any such point exists; ties go to the
    smaller quantity. `feasible` reports whether the incumbent meets the
    floor either way.
    """
    if q_start < 1:
        raise DomainError("q_start must be >= 1")
    if q_step < 1:
        raise DomainError("q_step must be >= 1")
    if q_end < q_start:
        raise DomainError("q_end must be >= q_start")
    quantities = range(q_start, q_end + 1, q_step)
    demand = demand_matrix(spec, model, config)
    summaries = summaries_from_demand(spec, policy, demand, list(quantities))

    def best_of(candidates: Sequence[SimulationSummary]) -> SimulationSummary:
        top = candidates[0]
        for s in candidates[1:]:
            if s.mean_profit > top.mean_profit:
                top = s
        return top

    feasible_points = [s for s in summaries
                       if s.min_fill_rate >= config.fill_rate_floor]
    if enforce_fill_rate and feasible_points:
        incumbent = best_of(feasible_points)
    else:
        incumbent = best_of(summaries)
    return GridSearchResult(
        summaries=tuple(summaries), incumbent=incumbent,
        feasible=incumbent.min_fill_rate >= config.fill_rate_floor)
