"""JSON run-configuration schema (version 1) and its strict loader.

One file describes the full pipeline input: per-product economics, demand
statistics, simulation settings, and optimizer settings. Unknown keys are
rejected rather than ignored so typos surface as errors instead of silently
falling back to defaults.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

from .bayesopt import BayesOptConfig
from .errors import DomainError, ValidationError
from .policy import DemandStats, ProductSpec, round_half_up
from .simulate import SimulationConfig

__all__ = ["ProductConfig", "RunConfig", "load_run_config", "apply_seed"]

SCHEMA_VERSION = 1

_MODEL_KINDS = ("plain_normal", "bernoulli_gated")

_TOP_KEYS = {"schema", "service_level", "demand_model_kind", "output_dir",
             "simulation", "bayesopt", "products"}
_SIM_KEYS = {"horizon_days", "replications", "seed", "fill_rate_floor"}
_BO_KEYS = {"bounds", "n_initial", "n_iterations", "constraint_mode",
            "penalty_value", "beta", "seed", "acquisition_grid"}
_PRODUCT_KEYS = {"product_id", "purchase_cost", "lead_time_days",
                 "selling_price", "starting_stock", "order_cost",
                 "holding_cost_flat", "holding_rate_annual", "stats",
                 "reported_policy"}
_STATS_KEYS = {"mean_daily", "std_daily", "prob_demand_day",
               "total_annual_demand", "max_daily", "demand_lead"}
_REPORTED_KEYS = {"safety_stock", "reorder_point", "eoq"}


@dataclass(frozen=True)
class ProductConfig:
    spec: ProductSpec
    stats: DemandStats
    # Externally published policy values carried for comparison only; the
    # pipeline never computes with them.
    reported_policy: dict | None = None


@dataclass(frozen=True)
class RunConfig:
    products: tuple[ProductConfig, ...]
    service_level: float
    simulation: SimulationConfig
    bayesopt: BayesOptConfig
    output_dir: str | None


def _check_keys(obj: dict, allowed: set, path: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ValidationError(f"{path}: unknown key(s) {sorted(unknown)}")


def _number(obj: dict, key: str, path: str, default=None) -> float:
    if key not in obj:
        if default is None:
            raise ValidationError(f"{path}.{key}: required")
        return default
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{path}.{key}: expected a number")
    return float(value)


def _integer(obj: dict, key: str, path: str, default=None) -> int:
    value = _number(obj, key, path, default)
    if value != int(value):
        raise ValidationError(f"{path}.{key}: expected an integer")
    return int(value)


def _string(obj: dict, key: str, path: str, default=None,
            choices: tuple | None = None) -> str:
    if key not in obj:
        if default is None:
            raise ValidationError(f"{path}.{key}: required")
        return default
    value = obj[key]
    if not isinstance(value, str):
        raise ValidationError(f"{path}.{key}: expected a string")
    if choices is not None and value not in choices:
        raise ValidationError(f"{path}.{key}: must be one of {choices}")
    return value


def _parse_stats(obj, spec: ProductSpec, path: str) -> DemandStats:
    if not isinstance(obj, dict):
        raise ValidationError(f"{path}: expected an object")
    _check_keys(obj, _STATS_KEYS, path)
    mean_daily = _number(obj, "mean_daily", path)
    if "demand_lead" in obj:
        demand_lead = _integer(obj, "demand_lead", path)
    else:
        demand_lead = round_half_up(mean_daily * spec.lead_time_days)
    try:
        return DemandStats(
            mean_daily=mean_daily,
            std_daily=_number(obj, "std_daily", path),
            prob_demand_day=_number(obj, "prob_demand_day", path),
            total_annual_demand=_number(obj, "total_annual_demand", path),
            max_daily=_number(obj, "max_daily", path),
            demand_lead=demand_lead)
    except DomainError as exc:
        raise ValidationError(f"{path}: {exc}") from None


def _parse_product(obj, path: str) -> ProductConfig:
    if not isinstance(obj, dict):
        raise ValidationError(f"{path}: expected an object")
    _check_keys(obj, _PRODUCT_KEYS, path)
    try:
        spec = ProductSpec(
            product_id=_string(obj, "product_id", path),
            purchase_cost=_number(obj, "purchase_cost", path),
            lead_time_days=_integer(obj, "lead_time_days", path),
            selling_price=_number(obj, "selling_price", path),
            starting_stock=_integer(obj, "starting_stock", path),
            order_cost=_number(obj, "order_cost", path),
            holding_cost_flat=_number(obj, "holding_cost_flat", path),
            holding_rate_annual=_number(obj, "holding_rate_annual", path,
                                        default=0.20))
    except DomainError as exc:
        raise ValidationError(f"{path}: {exc}") from None

    if "stats" not in obj:
        raise ValidationError(f"{path}.stats: required")
    stats = _parse_stats(obj["stats"], spec, f"{path}.stats")

    reported = obj.get("reported_policy")
    if reported is not None:
        if not isinstance(reported, dict):
            raise ValidationError(f"{path}.reported_policy: expected an object")
        _check_keys(reported, _REPORTED_KEYS, f"{path}.reported_policy")
    return ProductConfig(spec=spec, stats=stats, reported_policy=reported)


def _parse_simulation(obj, kind: str, path: str) -> SimulationConfig:
    if not isinstance(obj, dict):
        raise ValidationError(f"{path}: expected an object")
    _check_keys(obj, _SIM_KEYS, path)
    try:
        return SimulationConfig(
            horizon_days=_integer(obj, "horizon_days", path, default=365),
            replications=_integer(obj, "replications", path, default=1000),
            seed=_integer(obj, "seed", path, default=0),
            demand_model_kind=kind,
            fill_rate_floor=_number(obj, "fill_rate_floor", path, default=0.95))
    except DomainError as exc:
        raise ValidationError(f"{path}: {exc}") from None


def _parse_bayesopt(obj, path: str) -> BayesOptConfig:
    if not isinstance(obj, dict):
        raise ValidationError(f"{path}: expected an object")
    _check_keys(obj, _BO_KEYS, path)
    bounds = obj.get("bounds")
    if bounds is not None:
        if (not isinstance(bounds, list) or len(bounds) != 2
                or any(isinstance(b, bool) or not isinstance(b, (int, float))
                       or b != int(b) for b in bounds)):
            raise ValidationError(
                f"{path}.bounds: expected [q_min, q_max] integers or null")
        bounds = (int(bounds[0]), int(bounds[1]))
    try:
        return BayesOptConfig(
            bounds=bounds,
            n_initial=_integer(obj, "n_initial", path, default=5),
            n_iterations=_integer(obj, "n_iterations", path, default=25),
            constraint_mode=_string(obj, "constraint_mode", path, default="off",
                                    choices=("off", "penalty", "constrained")),
            penalty_value=_number(obj, "penalty_value", path, default=-1e9),
            beta=_number(obj, "beta", path, default=0.95),
            seed=_integer(obj, "seed", path, default=0),
            acquisition_grid=_integer(obj, "acquisition_grid", path,
                                      default=2048))
    except DomainError as exc:
        raise ValidationError(f"{path}: {exc}") from None


def load_run_config(source) -> RunConfig:
    """Parse and validate a run configuration.

    `source` is a dict already parsed from JSON, a text stream, or a path.
    """
    if isinstance(source, dict):
        raw = source
    else:
        try:
            if hasattr(source, "read"):
                raw = json.load(source)
            else:
                with open(source, "r", encoding="utf-8") as handle:
                    raw = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"config is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ValidationError("config root must be a JSON object")

    _check_keys(raw, _TOP_KEYS, "config")
    if raw.get("schema") != SCHEMA_VERSION:
        raise ValidationError(
            f"config.schema: expected {SCHEMA_VERSION}, got {raw.get('schema')!r}")

    service_level = _number(raw, "service_level", "config", default=0.95)
    if not (0.0 < service_level < 1.0):
        raise ValidationError("config.service_level: must be in (0, 1)")
    kind = _string(raw, "demand_model_kind", "config", default="plain_normal",
                   choices=_MODEL_KINDS)
    output_dir = raw.get("output_dir")
    if output_dir is not None and not isinstance(output_dir, str):
        raise ValidationError("config.output_dir: expected a string")

    simulation = _parse_simulation(raw.get("simulation", {}), kind,
                                   "config.simulation")
    bayesopt = _parse_bayesopt(raw.get("bayesopt", {}), "config.bayesopt")

    products_raw = raw.get("products")
    if not isinstance(products_raw, list) or not products_raw:
        raise ValidationError("config.products: expected a nonempty array")
    products = tuple(_parse_product(p, f"config.products[{i}]")
                     for i, p in enumerate(products_raw))
    ids = [p.spec.product_id for p in products]
    if len(set(ids)) != len(ids):
        raise ValidationError("config.products: duplicate product_id")

    return RunConfig(products=products, service_level=service_level,
                     simulation=simulation, bayesopt=bayesopt,
                     output_dir=output_dir)


def apply_seed(config: RunConfig, seed: int) -> RunConfig:
    """Override both the simulation and optimizer seeds with one master seed."""
    return dataclasses.replace(
        config,
        simulation=dataclasses.replace(config.simulation, seed=int(seed)),
        bayesopt=dataclasses.replace(config.bayesopt, seed=int(seed)))
