"""Command-line front end for the inventory toolkit.

Subcommands: summarize (statistics and derived policy per product),
decompose (seasonal-trend split of one product's sales), fixture (synthetic
sales CSV reproducing configured statistics), optimize (grid or Bayesian
order-quantity search), analyze (sensitivity sweep, what-if grid, ANOVA).

Exit codes: 0 success, 2 I/O failure, 3 validation or domain failure.
All outputs are byte-identical across reruns with the same inputs and seed;
wall-clock timing therefore goes to stderr, never into output files.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .analysis import (
    DEFAULT_VARIATIONS,
    SWEEP_PARAMETERS,
    one_way_anova,
    sensitivity_sweep,
    whatif_profit_grid,
)
from .bayesopt import optimize as bayes_optimize
from .decompose import decompose
from .demand import (
    demand_model_from_stats,
    ingest,
    make_fixture,
    policy_from_stats,
    sales_series_to_csv,
    summarize,
)
from .errors import InvOptError, ValidationError
from .runconfig import ProductConfig, RunConfig, apply_seed, load_run_config
from .simulate import grid_search

SUMMARY_HEADER = ("product", "q", "mean_profit", "profit_std",
                  "mean_lost_orders", "min_fill_rate")
TRACE_HEADER = ("iter", "q", "mean_profit", "profit_std", "min_fill_rate",
                "feasible", "ei")
STATS_HEADER = ("product", "mean_daily", "std_daily", "prob_demand_day",
                "total_annual_demand", "max_daily", "demand_lead",
                "safety_stock", "reorder_point", "eoq")
STL_HEADER = ("day", "observed", "trend", "seasonal", "residual")
SWEEP_HEADER = ("product", "parameter", "variation", "q", "mean_profit",
                "profit_std", "mean_lost_orders", "min_fill_rate")
WHATIF_HEADER = ("product", "adjusted_profit", "overall_profit")


def _cell(value) -> str:
    """Locale-independent cell text; floats keep full round-trip precision."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


@contextlib.contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            yield handle


def _write_csv(path: str, header, rows) -> None:
    with _open_out(path) as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def _load_config(args) -> RunConfig:
    if not args.config:
        raise ValidationError("this command requires --config")
    config = load_run_config(args.config)
    seed = _resolve_seed(args)
    if seed is not None:
        config = apply_seed(config, seed)
    return config


def _resolve_seed(args) -> int | None:
    if getattr(args, "seed", None) is not None:
        return args.seed
    raw = os.environ.get("INVOPT_SEED")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"INVOPT_SEED must be an integer, got {raw!r}") from None


def _ingest_path(path: str):
    with open(path, "r", encoding="utf-8", newline="") as handle:
        return ingest(handle)


# --- summarize -------------------------------------------------------------

def cmd_summarize(args) -> int:
    config = _load_config(args)
    rows = []
    if args.input:
        series_map = _ingest_path(args.input)
        known = {p.spec.product_id for p in config.products}
        strays = sorted(set(series_map) - known)
        if strays:
            raise ValidationError(
                f"sales data contains products missing from the config: {strays}")
        for product in config.products:
            pid = product.spec.product_id
            if pid not in series_map:
                raise ValidationError(f"no observations for product {pid!r}")
            stats, policy = summarize(series_map[pid], product.spec,
                                      config.service_level)
            rows.append(_stats_row(pid, stats, policy))
    else:
        for product in config.products:
            policy = policy_from_stats(product.stats, product.spec,
                                       config.service_level)
            rows.append(_stats_row(product.spec.product_id, product.stats,
                                   policy))
    _write_csv(args.out, STATS_HEADER, rows)
    return 0


def _stats_row(pid, stats, policy):
    return (pid, stats.mean_daily, stats.std_daily, stats.prob_demand_day,
            stats.total_annual_demand, stats.max_daily, stats.demand_lead,
            policy.safety_stock, policy.reorder_point, policy.order_quantity)


# --- decompose ---------------------------------------------------------------

def cmd_decompose(args) -> int:
    series_map = _ingest_path(args.input)
    if args.product not in series_map:
        raise ValidationError(
            f"unknown product {args.product!r}; "
            f"sales data has {sorted(series_map)}")
    result = decompose(series_map[args.product], period=args.period,
                       robustness_iters=args.robustness_iters)
    rows = zip(range(len(result.observed)), result.observed, result.trend,
               result.seasonal, result.residual)
    _write_csv(args.out, STL_HEADER, rows)
    return 0


# --- fixture ---------------------------------------------------------------

def cmd_fixture(args) -> int:
    config = _load_config(args)
    seed = config.simulation.seed
    series = {}
    for product in config.products:
        pid = product.spec.product_id
        series[pid] = make_fixture(product.stats, args.days, seed,
                                   product_id=pid)
    with _open_out(args.out) as handle:
        sales_series_to_csv(series, handle)
    return 0


# --- optimize ----------------------------------------------------------------

def _optimize_one(job: tuple) -> dict:
    """Evaluate one product; top-level so process pools can pickle it.
    Returns plain dicts/lists only, keeping worker messages cheap."""
    (product, service_level, sim_config, bo_config, method,
     q_step, q_span, enforce) = job
    spec, stats = product.spec, product.stats
    policy = policy_from_stats(stats, spec, service_level)
    model = demand_model_from_stats(stats, sim_config.demand_model_kind)

    if method == "grid":
        q_start = max(policy.reorder_point, 1)
        result = grid_search(spec, policy, model, sim_config, q_start,
                             q_start + q_span, q_step,
                             enforce_fill_rate=enforce)
        summary_rows = [
            (s.order_quantity, s.mean_profit, s.profit_std,
             s.mean_lost_orders, s.min_fill_rate)
            for s in result.summaries]
        trace_rows = [
            (i, s.order_quantity, s.mean_profit, s.profit_std,
             s.min_fill_rate,
             s.min_fill_rate >= sim_config.fill_rate_floor, 0.0)
            for i, s in enumerate(result.summaries)]
        best = result.incumbent
        incumbent = {"q": best.order_quantity, "mean_profit": best.mean_profit,
                     "min_fill_rate": best.min_fill_rate,
                     "feasible": result.feasible}
    else:
        run = bayes_optimize(spec, policy, model, sim_config, bo_config)
        summary_rows = [
            (e.q, e.mean_profit, e.profit_std, e.mean_lost_orders,
             e.min_fill_rate)
            for e in run.evaluations]
        trace_rows = [
            (i, e.q, e.mean_profit, e.profit_std, e.min_fill_rate,
             e.feasible, e.acquisition_value)
            for i, e in enumerate(run.evaluations)]
        if run.incumbent is None:
            incumbent = None
        else:
            incumbent = {"q": run.incumbent.q,
                         "mean_profit": run.incumbent.mean_profit,
                         "min_fill_rate": run.incumbent.min_fill_rate,
                         "feasible": run.incumbent.feasible}
    return {"product": spec.product_id, "summary_rows": summary_rows,
            "trace_rows": trace_rows, "incumbent": incumbent}


def _safe_name(product_id: str) -> str:
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in product_id)


def _resolve_out_dir(args, config: RunConfig | None) -> str:
    out = args.out or (config.output_dir if config else None)
    if not out:
        raise ValidationError(
            "no output directory: pass --out or set output_dir in the config")
    os.makedirs(out, exist_ok=True)
    return out


def cmd_optimize(args) -> int:
    started = time.monotonic()
    config = _load_config(args)
    out_dir = _resolve_out_dir(args, config)

    jobs = [(product, config.service_level, config.simulation, config.bayesopt,
             args.method, args.q_step, args.q_span, args.enforce_fill_rate)
            for product in config.products]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_optimize_one, jobs))
    else:
        results = [_optimize_one(job) for job in jobs]

    summary_rows = []
    incumbents = {}
    for outcome in results:
        pid = outcome["product"]
        summary_rows.extend((pid, *row) for row in outcome["summary_rows"])
        _write_csv(os.path.join(out_dir, f"trace_{_safe_name(pid)}.csv"),
                   TRACE_HEADER, outcome["trace_rows"])
        incumbents[pid] = outcome["incumbent"]
    _write_csv(os.path.join(out_dir, "summary.csv"), SUMMARY_HEADER,
               summary_rows)

    payload = {"schema": 1, "method": args.method,
               "seed": config.simulation.seed, "products": incumbents}
    with open(os.path.join(out_dir, "incumbents.json"), "w",
              encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, allow_nan=False)
        handle.write("\n")

    print(f"time taken: {time.monotonic() - started:.2f} seconds",
          file=sys.stderr)
    return 0


# --- analyze -----------------------------------------------------------------

def _parse_variations(raw: str) -> list[float]:
    try:
        return [float(part) for part in raw.split(",") if part.strip()]
    except ValueError:
        raise ValidationError(
            f"--variations must be comma-separated numbers, got {raw!r}") from None


def _run_sensitivity(args, config: RunConfig, out_dir: str) -> None:
    variations = (_parse_variations(args.variations) if args.variations
                  else list(DEFAULT_VARIATIONS))
    rows = []
    for product in config.products:
        spec, stats = product.spec, product.stats
        policy = policy_from_stats(stats, spec, config.service_level)
        model = demand_model_from_stats(stats,
                                        config.simulation.demand_model_kind)
        report = sensitivity_sweep(spec, model, config.simulation, policy,
                                   args.sensitivity, variations)
        base = report.baseline
        rows.append((spec.product_id, report.parameter, 0.0,
                     base.order_quantity, base.mean_profit, base.profit_std,
                     base.mean_lost_orders, base.min_fill_rate))
        for cell in report.cells:
            if cell.summary is None:
                continue
            s = cell.summary
            rows.append((spec.product_id, report.parameter, cell.variation,
                         s.order_quantity, s.mean_profit, s.profit_std,
                         s.mean_lost_orders, s.min_fill_rate))
    _write_csv(os.path.join(out_dir, "sweep.csv"), SWEEP_HEADER, rows)


def _read_table(path: str) -> tuple[list[str], dict[str, list]]:
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: empty file") from None
        columns: dict[str, list] = {name: [] for name in header}
        if len(columns) != len(header):
            raise ValidationError(f"{path}: duplicate column names")
        for row in reader:
            if len(row) != len(header):
                raise ValidationError(f"{path}: ragged row {row!r}")
            for name, value in zip(header, row):
                columns[name].append(value)
    return header, columns


def _numeric_or_none(values: list) -> list[float] | None:
    try:
        return [float(v) for v in values]
    except ValueError:
        return None


def _json_number(x: float):
    return x if math.isfinite(x) else "inf"


def _run_anova(args, out_dir: str) -> None:
    path_a, path_b = args.anova
    header_a, cols_a = _read_table(path_a)
    header_b, cols_b = _read_table(path_b)
    if header_a != header_b:
        raise ValidationError(
            f"column mismatch: {path_a} has {header_a}, {path_b} has {header_b}")

    report = {}
    for name in header_a:
        group_a = _numeric_or_none(cols_a[name])
        group_b = _numeric_or_none(cols_b[name])
        if group_a is None and group_b is None:
            continue
        if group_a is None or group_b is None:
            raise ValidationError(
                f"column {name!r} is numeric in only one of the files")
        result = one_way_anova([group_a, group_b])
        report[name] = {"f_statistic": _json_number(result.f_statistic),
                        "p_value": _json_number(result.p_value),
                        "df_between": result.df_between,
                        "df_within": result.df_within}
    with open(os.path.join(out_dir, "anova.json"), "w",
              encoding="utf-8") as handle:
        json.dump({"schema": 1, "columns": report}, handle, indent=2,
                  allow_nan=False)
        handle.write("\n")


def _run_whatif(args, out_dir: str) -> None:
    with open(args.whatif, "r", encoding="utf-8") as handle:
        payload = json.load(handle)
    products = payload.get("products")
    if not isinstance(products, dict) or not products:
        raise ValidationError(
            f"{args.whatif}: expected an incumbents file with a 'products' map")
    labels, means = [], []
    for pid, entry in products.items():
        if entry is None:
            continue
        if not isinstance(entry, dict) or "mean_profit" not in entry:
            raise ValidationError(f"{args.whatif}: malformed entry for {pid!r}")
        labels.append(pid)
        means.append(float(entry["mean_profit"]))
    if not labels:
        raise ValidationError(f"{args.whatif}: no products with an incumbent")
    rows = whatif_profit_grid(means, args.half_range, args.steps, labels)
    _write_csv(os.path.join(out_dir, "whatif.csv"), WHATIF_HEADER, rows)


def cmd_analyze(args) -> int:
    if not (args.sensitivity or args.anova or args.whatif):
        raise ValidationError(
            "nothing to do: pass --sensitivity, --anova, or --whatif")
    config = _load_config(args) if args.config else None
    if args.sensitivity and config is None:
        raise ValidationError("--sensitivity requires --config")
    out_dir = _resolve_out_dir(args, config)
    if args.sensitivity:
        _run_sensitivity(args, config, out_dir)
    if args.anova:
        _run_anova(args, out_dir)
    if args.whatif:
        _run_whatif(args, out_dir)
    return 0


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="invopt",
        description="Inventory policy toolkit: statistics, simulation, "
                    "order-quantity optimization, and analytics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("summarize",
                       help="per-product demand statistics and derived policy")
    p.add_argument("--config", required=True, help="run configuration JSON")
    p.add_argument("--input", help="sales CSV (date,product_id,quantity); "
                                   "omit to use the statistics in the config")
    p.add_argument("--out", default="-", help="output CSV path, '-' for stdout")
    p.add_argument("--seed", type=int, help="unused here; accepted for "
                                            "uniform invocation")
    p.set_defaults(func=cmd_summarize)

    p = sub.add_parser("decompose",
                       help="seasonal-trend decomposition of one product")
    p.add_argument("--input", required=True, help="sales CSV")
    p.add_argument("--product", required=True, help="product_id to decompose")
    p.add_argument("--period", type=int, default=30,
                   help="seasonal period in days (default 30)")
    p.add_argument("--robustness-iters", type=int, default=1,
                   help="outer robustness passes (default 1)")
    p.add_argument("--out", default="-", help="output CSV path, '-' for stdout")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("fixture",
                       help="synthetic sales CSV matching configured statistics")
    p.add_argument("--config", required=True)
    p.add_argument("--days", type=int, default=365)
    p.add_argument("--seed", type=int, help="master seed (default: config)")
    p.add_argument("--out", default="-", help="output CSV path, '-' for stdout")
    p.set_defaults(func=cmd_fixture)

    p = sub.add_parser("optimize", help="order-quantity search per product")
    p.add_argument("--config", required=True)
    p.add_argument("--method", required=True, choices=("grid", "bayes"))
    p.add_argument("--seed", type=int,
                   help="master seed overriding config and INVOPT_SEED")
    p.add_argument("--jobs", type=int, default=1,
                   help="worker processes across products (default 1); "
                        "results are identical at any level")
    p.add_argument("--q-step", type=int, default=10,
                   help="grid method: quantity increment (default 10)")
    p.add_argument("--q-span", type=int, default=5000,
                   help="grid method: quantities swept above the reorder "
                        "point (default 5000)")
    p.add_argument("--enforce-fill-rate", action="store_true",
                   help="grid method: restrict the incumbent to points "
                        "meeting the fill-rate floor")
    p.add_argument("--out", help="output directory "
                                 "(default: output_dir from the config)")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("analyze",
                       help="sensitivity sweep, what-if grid, or ANOVA")
    p.add_argument("--config", help="run configuration JSON "
                                    "(required for --sensitivity)")
    p.add_argument("--sensitivity", choices=SWEEP_PARAMETERS,
                   help="parameter to vary one at a time")
    p.add_argument("--variations",
                   help="comma-separated signed fractions "
                        "(default -0.2,-0.1,0.1,0.2)")
    p.add_argument("--anova", nargs=2, metavar=("A_CSV", "B_CSV"),
                   help="two result CSVs to compare column by column")
    p.add_argument("--whatif", metavar="INCUMBENTS_JSON",
                   help="incumbents file to build a what-if profit grid from")
    p.add_argument("--half-range", type=float, default=50000.0,
                   help="what-if half range around each mean (default 50000)")
    p.add_argument("--steps", type=int, default=5,
                   help="what-if points per product (default 5)")
    p.add_argument("--seed", type=int,
                   help="master seed overriding config and INVOPT_SEED")
    p.add_argument("--out", help="output directory "
                                 "(default: output_dir from the config)")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvOptError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
