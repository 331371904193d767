"""Daily sales-history ingestion, summary statistics, the stochastic demand
generator used by the simulator, and a deterministic fixture builder for
producing series that reproduce a target statistical summary.
"""

from __future__ import annotations

import csv
import datetime as _dt
import io
import warnings
from dataclasses import dataclass
from typing import IO, Literal, Mapping

import numpy as np

from .errors import DomainError, ParseError, ValidationError
from .policy import (
    DemandStats,
    InventoryPolicy,
    ProductSpec,
    eoq,
    reorder_point,
    round_half_up,
    safety_stock,
)
from .seeding import derive_rng

__all__ = [
    "SalesSeries",
    "DemandModel",
    "ingest",
    "summarize",
    "policy_from_stats",
    "sample_demand",
    "sample_demand_series",
    "demand_model_from_stats",
    "make_fixture",
    "sales_series_to_csv",
]

CSV_HEADER = ("date", "product_id", "quantity")

ModelKind = Literal["plain_normal", "bernoulli_gated"]


@dataclass(frozen=True, eq=False)
class SalesSeries:
    """A densified daily sales history: one quantity per consecutive day."""

    product_id: str
    quantities: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.quantities, dtype=np.int64)
        if q.ndim != 1 or q.size == 0:
            raise DomainError("sales series must hold at least one day")
        if (q < 0).any():
            raise DomainError("sales quantities must be >= 0")
        object.__setattr__(self, "quantities", q)
        q.setflags(write=False)

    @property
    def horizon_days(self) -> int:
        return int(self.quantities.size)


@dataclass(frozen=True)
class DemandModel:
    """Stochastic daily-demand generator parameters.

    plain_normal draws Normal(mean_daily, std_daily) each day.
    bernoulli_gated keeps a demand day with probability prob_demand_day and
    draws Normal(mean_daily / prob_demand_day, std_daily) when it does, so
    the unconditional mean stays at mean_daily.
    """

    kind: ModelKind
    mean_daily: float
    std_daily: float
    prob_demand_day: float = 1.0

    def __post_init__(self):
        if self.kind not in ("plain_normal", "bernoulli_gated"):
            raise DomainError(f"unknown demand model kind {self.kind!r}")
        if self.std_daily < 0:
            raise DomainError("std_daily must be >= 0")
        if not (0.0 <= self.prob_demand_day <= 1.0):
            raise DomainError("prob_demand_day must be in [0, 1]")
        if self.kind == "bernoulli_gated" and self.prob_demand_day <= 0.0:
            raise DomainError("bernoulli_gated requires prob_demand_day > 0")


def _open_text(csv_source) -> IO[str]:
    if isinstance(csv_source, (str, bytes)) and not hasattr(csv_source, "read"):
        raise TypeError("ingest expects a readable stream, not a path string")
    if isinstance(csv_source, io.TextIOBase):
        return csv_source
    return io.TextIOWrapper(csv_source, encoding="utf-8")


def ingest(csv_source) -> dict[str, SalesSeries]:
    """Parse a `date,product_id,quantity` CSV stream into per-product series.

    Dates are ISO-8601 and mapped to consecutive day indices per product;
    days missing between the first and last observed dates become
    zero-quantity days.
    """
    reader = csv.reader(_open_text(csv_source))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty input, expected a header row", line=1) from None
    if [h.strip() for h in header] != list(CSV_HEADER):
        raise ParseError(
            f"expected header {','.join(CSV_HEADER)!r}, got {','.join(header)!r}", line=1
        )

    per_product: dict[str, dict[_dt.date, int]] = {}
    for line_no, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != 3:
            raise ParseError(f"expected 3 fields, got {len(row)}", line=line_no)
        raw_date, product_id, raw_qty = (field.strip() for field in row)
        try:
            day = _dt.date.fromisoformat(raw_date)
        except ValueError:
            raise ParseError(f"bad date {raw_date!r}", line=line_no) from None
        if not product_id:
            raise ParseError("empty product_id", line=line_no)
        try:
            qty = int(raw_qty)
        except ValueError:
            raise ParseError(f"bad quantity {raw_qty!r}", line=line_no) from None
        if qty < 0:
            raise ValidationError(f"line {line_no}: negative quantity {qty}")
        bucket = per_product.setdefault(product_id, {})
        if day in bucket:
            raise ValidationError(f"line {line_no}: duplicate date {day} for {product_id}")
        bucket[day] = qty

    series: dict[str, SalesSeries] = {}
    for product_id, observations in per_product.items():
        first, last = min(observations), max(observations)
        quantities = np.zeros((last - first).days + 1, dtype=np.int64)
        for day, qty in observations.items():
            quantities[(day - first).days] = qty
        series[product_id] = SalesSeries(product_id, quantities)
    return series


def policy_from_stats(stats: DemandStats, spec: ProductSpec,
                      service_level: float = 0.95) -> InventoryPolicy:
    """Derive the (safety stock, reorder point, EOQ) policy from a summary."""
    ss = safety_stock(stats.std_daily, spec.lead_time_days, service_level)
    rop = reorder_point(stats.mean_daily, spec.lead_time_days, ss)
    q = eoq(stats.total_annual_demand, spec.order_cost, spec.holding_cost_flat)
    return InventoryPolicy(safety_stock=ss, reorder_point=rop, order_quantity=q,
                           service_level=service_level)


def summarize(series: SalesSeries, spec: ProductSpec,
              service_level: float = 0.95) -> tuple[DemandStats, InventoryPolicy]:
    """Summary statistics over all days (zeros included) plus the derived policy."""
    q = series.quantities
    if q.size == 0:
        raise DomainError("cannot summarize an empty series")
    mean_daily = float(q.mean())
    std_daily = float(q.std(ddof=1)) if q.size > 1 else 0.0
    stats = DemandStats(
        mean_daily=mean_daily,
        std_daily=std_daily,
        prob_demand_day=float((q > 0).mean()),
        total_annual_demand=float(q.sum()),
        max_daily=float(q.max()),
        demand_lead=round_half_up(mean_daily * spec.lead_time_days),
    )
    if stats.total_annual_demand <= 0:
        raise DomainError(f"series for {series.product_id!r} has zero total demand")
    return stats, policy_from_stats(stats, spec, service_level)


def demand_model_from_stats(stats: DemandStats, kind: ModelKind) -> DemandModel:
    return DemandModel(kind=kind, mean_daily=stats.mean_daily,
                       std_daily=stats.std_daily,
                       prob_demand_day=stats.prob_demand_day)


def sample_demand_series(model: DemandModel, days: int,
                         rng: np.random.Generator) -> np.ndarray:
    """Draw `days` consecutive daily demands; never negative.

    bernoulli_gated consumes the gate uniforms for all days first, then the
    magnitude draws, so a series is one deterministic function of the stream.
    """
    if days < 0:
        raise DomainError("days must be >= 0")
    if model.kind == "plain_normal":
        vals = rng.normal(model.mean_daily, model.std_daily, size=days)
        return np.maximum(np.rint(vals), 0).astype(np.int64)
    gates = rng.random(size=days) < model.prob_demand_day
    conditional_mean = model.mean_daily / model.prob_demand_day
    vals = rng.normal(conditional_mean, model.std_daily, size=days)
    return np.where(gates, np.maximum(np.rint(vals), 0), 0).astype(np.int64)


def sample_demand(model: DemandModel, rng: np.random.Generator) -> int:
    """One day's demand drawn from the model."""
    return int(sample_demand_series(model, 1, rng)[0])


def make_fixture(stats: DemandStats, days: int, seed: int,
                 product_id: str = "fixture") -> SalesSeries:
    """Deterministic synthetic series reproducing a statistical summary.

    The number of demand days is fixed at round(P * days) and the positive
    quantities are moment-matched (shifted and scaled before rounding), so
    the summarized mean lands within a fraction of a percent of the target
    rather than drifting with sampling noise.  Infeasible targets degrade to
    best effort with a warning.
    """
    if days < 1:
        raise DomainError("days must be >= 1")
    rng = derive_rng(seed, "fixture", product_id)
    quantities = np.zeros(days, dtype=np.int64)
    n_open = round_half_up(stats.prob_demand_day * days)

    if n_open == 0:
        if stats.mean_daily > 0:
            warnings.warn(
                "requested mean is unreachable with zero demand days; emitting zeros",
                RuntimeWarning, stacklevel=2)
        return SalesSeries(product_id, quantities)

    positions = rng.permutation(days)[:n_open]
    p_eff = n_open / days
    conditional_mean = stats.mean_daily / p_eff
    # Conditional spread that reproduces the unconditional std once the
    # closed days' zeros are mixed back in; clipped at 0 when the gate's own
    # variance already exceeds the target.
    cond_var = (stats.std_daily ** 2) / p_eff - (conditional_mean ** 2) * (1.0 - p_eff)
    conditional_std = float(np.sqrt(cond_var)) if cond_var > 0 else 0.0
    if cond_var < 0 and stats.std_daily > 0:
        warnings.warn("requested std is below the gate-induced floor; using 0",
                      RuntimeWarning, stacklevel=2)

    draws = rng.normal(0.0, 1.0, size=n_open)
    if n_open >= 2 and conditional_std > 0:
        spread = float(draws.std(ddof=1))
        centered = (draws - draws.mean()) / spread if spread > 0 else np.zeros(n_open)
        values = conditional_mean + conditional_std * centered
    else:
        values = np.full(n_open, conditional_mean)
    quantities[positions] = np.maximum(np.rint(values), 1).astype(np.int64)

    realized_mean = quantities.mean()
    realized_p = (quantities > 0).mean()
    scale = max(abs(stats.mean_daily), 1.0)
    if abs(realized_mean - stats.mean_daily) > 0.02 * scale or \
            abs(realized_p - stats.prob_demand_day) > 0.03:
        warnings.warn(
            f"fixture stats off target (mean {realized_mean:.2f} vs "
            f"{stats.mean_daily:.2f}, p {realized_p:.3f} vs "
            f"{stats.prob_demand_day:.3f}); stats may be infeasible",
            RuntimeWarning, stacklevel=2)
    return SalesSeries(product_id, quantities)


def sales_series_to_csv(series_by_product: Mapping[str, SalesSeries] | SalesSeries,
                        out: IO[str],
                        start_date: _dt.date = _dt.date(2023, 1, 1)) -> None:
    """Write one or more series back to the ingestable CSV layout."""
    if isinstance(series_by_product, SalesSeries):
        series_by_product = {series_by_product.product_id: series_by_product}
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for product_id, series in series_by_product.items():
        for day, qty in enumerate(series.quantities):
            writer.writerow([(start_date + _dt.timedelta(days=day)).isoformat(),
                             product_id, int(qty)])
