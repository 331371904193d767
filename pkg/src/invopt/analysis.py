"""Post-optimization analytics: one-at-a-time sensitivity sweeps, what-if
profit grids, and one-way ANOVA for comparing result sets.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Sequence

from .demand import DemandModel
from .errors import DomainError
from .policy import InventoryPolicy, ProductSpec, round_half_up
from .simulate import SimulationConfig, SimulationSummary, run_monte_carlo
from .special import f_sf

__all__ = [
    "SWEEP_PARAMETERS",
    "DEFAULT_VARIATIONS",
    "SensitivityCell",
    "SensitivityReport",
    "AnovaResult",
    "sensitivity_sweep",
    "whatif_profit_grid",
    "one_way_anova",
]

# Parameters the sweep may scale. Policy quantities are integers and get
# rounded after scaling; the rest are ProductSpec economics. Demand-model
# parameters are deliberately absent: scaling them would change the demand
# draws and break the shared-seed-bank comparison.
SWEEP_PARAMETERS = (
    "order_quantity",
    "reorder_point",
    "selling_price",
    "purchase_cost",
    "order_cost",
    "holding_rate_annual",
)

DEFAULT_VARIATIONS = (-0.20, -0.10, 0.10, 0.20)


@dataclass(frozen=True)
class SensitivityCell:
    variation: float
    summary: SimulationSummary | None  # None when the scaled value was skipped


@dataclass(frozen=True)
class SensitivityReport:
    parameter: str
    baseline: SimulationSummary
    cells: tuple[SensitivityCell, ...]


@dataclass(frozen=True)
class AnovaResult:
    f_statistic: float
    p_value: float
    df_between: int
    df_within: int


def _scaled_setup(spec: ProductSpec, policy: InventoryPolicy, parameter: str,
                  factor: float) -> tuple[ProductSpec, InventoryPolicy] | None:
    """Scale one parameter by `factor`; None when the result is unusable."""
    if parameter == "order_quantity":
        q = round_half_up(policy.order_quantity * factor)
        if q < 1:
            return None
        return spec, replace(policy, order_quantity=q)
    if parameter == "reorder_point":
        rop = round_half_up(policy.reorder_point * factor)
        if rop < 0:
            return None
        return spec, replace(policy, reorder_point=rop)
    value = getattr(spec, parameter) * factor
    if value <= 0:
        return None
    return replace(spec, **{parameter: value}), policy


def sensitivity_sweep(spec: ProductSpec, model: DemandModel,
                      sim_config: SimulationConfig,
                      baseline_policy: InventoryPolicy, parameter: str,
                      variations: Sequence[float] = DEFAULT_VARIATIONS
                      ) -> SensitivityReport:
    """Re-simulate with one parameter scaled by (1 + v) for each variation.

    Every cell reruns the Monte Carlo with the same configuration seed, so
    all cells and the baseline see identical demand scenarios and differ
    only through the varied parameter.
    """
    if parameter not in SWEEP_PARAMETERS:
        raise DomainError(
            f"unknown sweep parameter {parameter!r}; choose from {SWEEP_PARAMETERS}")
    for v in variations:
        if v <= -1:
            raise DomainError("variations must be > -1")

    baseline = run_monte_carlo(spec, baseline_policy, model, sim_config)
    cells = []
    for v in variations:
        setup = _scaled_setup(spec, baseline_policy, parameter, 1.0 + v)
        if setup is None:
            warnings.warn(
                f"skipping variation {v:+.0%}: scaled {parameter} is not positive",
                RuntimeWarning, stacklevel=2)
            cells.append(SensitivityCell(variation=float(v), summary=None))
            continue
        varied_spec, varied_policy = setup
        cells.append(SensitivityCell(
            variation=float(v),
            summary=run_monte_carlo(varied_spec, varied_policy, model, sim_config)))
    return SensitivityReport(parameter=parameter, baseline=baseline,
                             cells=tuple(cells))


def whatif_profit_grid(mean_profits: Sequence[float], half_range: float,
                       steps: int, labels: Sequence[str] | None = None
                       ) -> list[tuple[str, float, float]]:
    """Rows of (product, adjusted_profit, overall_profit) where one product's
    profit moves across [mean - half_range, mean + half_range] in `steps`
    even steps and the others stay at baseline."""
    if steps < 2:
        raise DomainError("steps must be >= 2")
    if half_range <= 0:
        raise DomainError("half_range must be > 0")
    if not mean_profits:
        raise DomainError("mean_profits must be nonempty")
    if labels is None:
        labels = [str(i) for i in range(len(mean_profits))]
    elif len(labels) != len(mean_profits):
        raise DomainError("labels and mean_profits must align")

    total = float(sum(mean_profits))
    width = 2.0 * half_range / (steps - 1)
    rows = []
    for label, mean in zip(labels, mean_profits):
        for k in range(steps):
            offset = -half_range + k * width
            rows.append((label, mean + offset, total + offset))
    return rows


def one_way_anova(groups: Sequence[Sequence[float]]) -> AnovaResult:
    """Classical one-way fixed-effects ANOVA across the given groups."""
    if len(groups) < 2:
        raise DomainError("anova needs at least 2 groups")
    cleaned = [[float(v) for v in g] for g in groups]
    for g in cleaned:
        if not g:
            raise DomainError("every group needs at least one value")
    total_n = sum(len(g) for g in cleaned)
    k = len(cleaned)
    if total_n <= k:
        raise DomainError("total observations must exceed the group count")

    grand = sum(sum(g) for g in cleaned) / total_n
    group_means = [sum(g) / len(g) for g in cleaned]
    ss_between = sum(len(g) * (m - grand) ** 2
                     for g, m in zip(cleaned, group_means))
    ss_within = sum(sum((v - m) ** 2 for v in g)
                    for g, m in zip(cleaned, group_means))
    df_between = k - 1
    df_within = total_n - k

    if ss_within == 0.0:
        f_stat = math.inf if ss_between > 0 else 0.0
    else:
        f_stat = (ss_between / df_between) / (ss_within / df_within)
    p_value = f_sf(f_stat, df_between, df_within)
    return AnovaResult(f_statistic=float(f_stat), p_value=float(p_value),
                       df_between=df_between, df_within=df_within)
