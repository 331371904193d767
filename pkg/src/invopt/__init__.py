"""Inventory-policy toolkit: demand statistics, classical (ROP, Q) policy
parameters, Monte Carlo policy evaluation, Gaussian-process Bayesian
optimization of the order quantity, and supporting analytics.
"""

from .analysis import (
    AnovaResult,
    SensitivityCell,
    SensitivityReport,
    one_way_anova,
    sensitivity_sweep,
    whatif_profit_grid,
)
from .bayesopt import (
    BayesOptConfig,
    Evaluation,
    OptimizationRun,
    expected_improvement,
    optimize,
    propose_next,
)
from .decompose import Decomposition, decompose
from .demand import (
    DemandModel,
    SalesSeries,
    demand_model_from_stats,
    ingest,
    make_fixture,
    policy_from_stats,
    sales_series_to_csv,
    sample_demand,
    sample_demand_series,
    summarize,
)
from .errors import (
    DomainError,
    InvOptError,
    NumericalError,
    ParseError,
    StateError,
    ValidationError,
)
from .gp import GPModel, KernelConfig, fit, log_marginal_likelihood, matern, predict, predict_many
from .policy import (
    DemandStats,
    InventoryPolicy,
    ProductSpec,
    eoq,
    lead_time_sigma,
    reorder_point,
    round_half_up,
    safety_stock,
    total_annual_cost,
)
from .runconfig import ProductConfig, RunConfig, apply_seed, load_run_config
from .seeding import derive_rng, derive_seed_sequence
from .simulate import (
    DayRecord,
    GridSearchResult,
    ReplicationResult,
    SimulationConfig,
    SimulationLedger,
    SimulationSummary,
    demand_matrix,
    grid_search,
    run_monte_carlo,
    simulate_replication,
    summaries_from_demand,
)
from .special import betainc_regularized, f_sf, normal_cdf, normal_pdf, normal_quantile

__version__ = "0.1.0"

__all__ = [
    "AnovaResult", "SensitivityCell", "SensitivityReport", "one_way_anova",
    "sensitivity_sweep", "whatif_profit_grid",
    "BayesOptConfig", "Evaluation", "OptimizationRun", "expected_improvement",
    "optimize", "propose_next",
    "Decomposition", "decompose",
    "DemandModel", "SalesSeries", "demand_model_from_stats", "ingest",
    "make_fixture", "policy_from_stats", "sales_series_to_csv",
    "sample_demand", "sample_demand_series", "summarize",
    "DomainError", "InvOptError", "NumericalError", "ParseError",
    "StateError", "ValidationError",
    "GPModel", "KernelConfig", "fit", "log_marginal_likelihood", "matern",
    "predict", "predict_many",
    "DemandStats", "InventoryPolicy", "ProductSpec", "eoq", "lead_time_sigma",
    "reorder_point", "round_half_up", "safety_stock", "total_annual_cost",
    "ProductConfig", "RunConfig", "apply_seed", "load_run_config",
    "derive_rng", "derive_seed_sequence",
    "DayRecord", "GridSearchResult", "ReplicationResult", "SimulationConfig",
    "SimulationLedger", "SimulationSummary", "demand_matrix", "grid_search",
    "run_monte_carlo", "simulate_replication", "summaries_from_demand",
    "betainc_regularized", "f_sf", "normal_cdf", "normal_pdf",
    "normal_quantile",
    "__version__",
]
