"""Bayesian optimization of the order quantity on a GP surrogate.

The loop is deterministic end to end: the initial design is evenly spaced,
every Monte Carlo evaluation reuses one fixed demand matrix (common random
numbers), hyperparameters come from a deterministic likelihood search, and
the acquisition argmax is taken over a dense integer grid. Penalty mode
feeds a large negative objective to the surrogate at infeasible points;
constrained mode instead weights expected improvement by the probability of
meeting the fill-rate floor under a second GP.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import gp
from .demand import DemandModel
from .errors import DomainError, StateError
from .policy import InventoryPolicy, ProductSpec
from .simulate import (
    SimulationConfig,
    SimulationSummary,
    demand_matrix,
    summaries_from_demand,
)
from .special import normal_cdf, normal_pdf

__all__ = [
    "BayesOptConfig",
    "Evaluation",
    "OptimizationRun",
    "expected_improvement",
    "propose_next",
    "optimize",
]

_MODES = ("off", "penalty", "constrained")


@dataclass(frozen=True)
class BayesOptConfig:
    bounds: tuple[int, int] | None = None  # None: [ROP, ROP + 8000]
    n_initial: int = 5
    n_iterations: int = 25
    constraint_mode: str = "off"
    penalty_value: float = -1e9
    beta: float = 0.95
    seed: int = 0
    acquisition_grid: int = 2048

    def __post_init__(self):
        if self.bounds is not None:
            lo, hi = self.bounds
            if lo < 1:
                raise DomainError("lower bound must be >= 1")
            if hi < lo:
                raise DomainError("upper bound must be >= lower bound")
            object.__setattr__(self, "bounds", (int(lo), int(hi)))
        if self.n_initial < 2:
            raise DomainError("n_initial must be >= 2")
        if self.n_iterations < 0:
            raise DomainError("n_iterations must be >= 0")
        if self.constraint_mode not in _MODES:
            raise DomainError(f"constraint_mode must be one of {_MODES}")
        if not (0.0 < self.beta <= 1.0):
            raise DomainError("beta must be in (0, 1]")
        if self.acquisition_grid < 2:
            raise DomainError("acquisition_grid must be >= 2")


@dataclass(frozen=True)
class Evaluation:
    q: int
    mean_profit: float
    profit_std: float
    mean_lost_orders: float
    min_fill_rate: float
    feasible: bool
    acquisition_value: float  # EI at proposal time; 0 for the initial design


@dataclass(frozen=True, eq=False)
class OptimizationRun:
    evaluations: tuple[Evaluation, ...]
    incumbent: Evaluation | None
    objective_gp: gp.GPModel
    constraint_gp: gp.GPModel | None
    bounds: tuple[int, int]


def _ei_vector(means: np.ndarray, stds: np.ndarray, best: float) -> np.ndarray:
    improve = means - best
    out = np.maximum(improve, 0.0)
    spread = stds > 0
    z = improve[spread] / stds[spread]
    out[spread] = improve[spread] * normal_cdf(z) + stds[spread] * normal_pdf(z)
    return np.maximum(out, 0.0)


def expected_improvement(mean: float, std: float, best: float) -> float:
    """Expected improvement over `best` for a maximization objective."""
    if std < 0:
        raise DomainError("std must be >= 0")
    return float(_ei_vector(np.array([mean], dtype=float),
                            np.array([std], dtype=float), best)[0])


def _candidate_grid(bounds: tuple[int, int], resolution: int) -> np.ndarray:
    lo, hi = bounds
    return np.unique(np.rint(np.linspace(lo, hi, resolution)).astype(np.int64))


def _objective_value(e: Evaluation, config: BayesOptConfig) -> float:
    if config.constraint_mode == "penalty" and not e.feasible:
        return config.penalty_value
    return e.mean_profit


def _best_observed(evaluations: Sequence[Evaluation],
                   config: BayesOptConfig) -> float:
    if config.constraint_mode == "constrained":
        feasible = [e.mean_profit for e in evaluations if e.feasible]
        if not feasible:
            raise StateError("no feasible evaluation to improve upon")
        return max(feasible)
    return max(_objective_value(e, config) for e in evaluations)


def _propose(run: OptimizationRun, config: BayesOptConfig) -> tuple[int, float]:
    model = run.objective_gp
    if model is None or model.n_train < 2:
        raise StateError("objective surrogate needs at least 2 fitted points")
    candidates = _candidate_grid(run.bounds, config.acquisition_grid)
    means, stds = gp.predict_many(model, candidates.astype(float))
    acq = _ei_vector(means, stds, _best_observed(run.evaluations, config))

    if config.constraint_mode == "constrained":
        if run.constraint_gp is None:
            raise StateError("constrained mode requires a constraint surrogate")
        c_means, c_stds = gp.predict_many(run.constraint_gp,
                                          candidates.astype(float))
        prob_feasible = np.where(
            c_stds > 0,
            normal_cdf(np.divide(c_means - config.beta,
                                 np.where(c_stds > 0, c_stds, 1.0))),
            (c_means >= config.beta).astype(float))
        acq = acq * prob_feasible

    # Ascending grid, so the first argmax is the smallest tying quantity.
    best_idx = int(np.argmax(acq))
    pick = int(candidates[best_idx])

    evaluated = {e.q for e in run.evaluations}
    if pick in evaluated:
        open_mask = ~np.isin(candidates, list(evaluated))
        if open_mask.any():
            open_idx = np.flatnonzero(open_mask)
            best_idx = int(open_idx[np.argmin(np.abs(candidates[open_idx] - pick))])
            pick = int(candidates[best_idx])
    return pick, float(acq[best_idx])


def propose_next(run: OptimizationRun, config: BayesOptConfig,
                 rng_stream=None) -> int:
    """Next order quantity to evaluate: the acquisition argmax over a dense
    integer grid, nudged to the nearest unevaluated cell on a repeat.
    The random stream is accepted for interface stability but unused;
    proposal is fully deterministic."""
    return _propose(run, config)[0]


def _initial_design(bounds: tuple[int, int], n_initial: int) -> list[int]:
    lo, hi = bounds
    if hi - lo < n_initial - 1:
        raise DomainError(
            f"bounds [{lo}, {hi}] span fewer integers than n_initial={n_initial}")
    return [int(v) for v in np.rint(np.linspace(lo, hi, n_initial))]


def _unique_pairs(pairs: list[tuple[float, float]]) -> list[tuple[float, float]]:
    seen: dict[float, float] = {}
    for x, y in pairs:
        seen.setdefault(x, y)
    return list(seen.items())


def _fit_surrogates(evaluations: Sequence[Evaluation], config: BayesOptConfig
                    ) -> tuple[gp.GPModel, gp.GPModel | None]:
    objective_pairs = _unique_pairs(
        [(float(e.q), _objective_value(e, config)) for e in evaluations])
    objective = gp.fit(objective_pairs, "auto")
    constraint = None
    if config.constraint_mode == "constrained":
        constraint_pairs = _unique_pairs(
            [(float(e.q), e.min_fill_rate) for e in evaluations])
        constraint = gp.fit(constraint_pairs, "auto")
    return objective, constraint


def _select_incumbent(evaluations: Sequence[Evaluation],
                      config: BayesOptConfig) -> Evaluation | None:
    if config.constraint_mode == "off":
        pool = list(evaluations)
    else:
        pool = [e for e in evaluations if e.feasible]
    best = None
    for e in pool:
        if best is None or e.mean_profit > best.mean_profit or \
                (e.mean_profit == best.mean_profit and e.q < best.q):
            best = e
    return best


def optimize(spec: ProductSpec, policy: InventoryPolicy, model: DemandModel,
             sim_config: SimulationConfig, config: BayesOptConfig,
             evaluator: Callable[[int], SimulationSummary] | None = None
             ) -> OptimizationRun:
    """Run the full loop: space-filling design, then fit-propose-evaluate.

    `evaluator` maps an order quantity to a SimulationSummary; the default
    evaluates the policy by Monte Carlo against one demand matrix shared by
    every quantity. Passing a stub makes the loop a pure function of the
    stub, which is how the synthetic-objective tests drive it.
    """
    bounds = config.bounds
    if bounds is None:
        bounds = (policy.reorder_point, policy.reorder_point + 8000)
        if bounds[0] < 1:
            bounds = (1, max(bounds[1], 1 + 8000))
    if evaluator is None:
        demand = demand_matrix(spec, model, sim_config)

        def evaluator(q: int) -> SimulationSummary:
            return summaries_from_demand(spec, policy, demand, [q])[0]

    def run_point(q: int, acquisition: float) -> Evaluation:
        s = evaluator(q)
        return Evaluation(q=int(q), mean_profit=s.mean_profit,
                          profit_std=s.profit_std,
                          mean_lost_orders=s.mean_lost_orders,
                          min_fill_rate=s.min_fill_rate,
                          feasible=s.min_fill_rate >= config.beta,
                          acquisition_value=acquisition)

    evaluations = [run_point(q, 0.0) for q in _initial_design(bounds,
                                                              config.n_initial)]
    if config.constraint_mode == "constrained" and \
            not any(e.feasible for e in evaluations):
        raise DomainError(
            "every initial point violates the fill-rate floor; "
            "switch to penalty mode or lower beta")

    objective_gp, constraint_gp = _fit_surrogates(evaluations, config)
    for _ in range(config.n_iterations):
        run = OptimizationRun(evaluations=tuple(evaluations),
                              incumbent=_select_incumbent(evaluations, config),
                              objective_gp=objective_gp,
                              constraint_gp=constraint_gp, bounds=bounds)
        q_next, acquisition = _propose(run, config)
        evaluations.append(run_point(q_next, acquisition))
        objective_gp, constraint_gp = _fit_surrogates(evaluations, config)

    return OptimizationRun(evaluations=tuple(evaluations),
                           incumbent=_select_incumbent(evaluations, config),
                           objective_gp=objective_gp,
                           constraint_gp=constraint_gp, bounds=bounds)
