"""Imputation benchmark: many seeds, several methods, one dataset.

Each seed draws one mask; every method imputes the same masked series, and
MAE ratios are taken against linear interpolation on that seed. Trials run
on a thread pool but every output is sorted by (seed, method, parameter), so
files come out byte-identical whatever the completion order.
"""

from __future__ import annotations

import logging
import math
import os
import statistics
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from l1impute import baselines, diagnostics, evaluation, solver
from l1impute.config import ImputeConfig, log_timestamp
from l1impute.errors import ConfigError, ImputeError
from l1impute.mask import Mask, generic_mask, uniform_mask
from l1impute.spectral import Signal

from . import datasets, series_io


_LOGGER = logging.getLogger("l1impute_tools.bench")

METHODS = ("linear", "trig", "l1-exact", "l1-loose", "l1-noisy")
RESULT_COLUMNS = [
    "seed",
    "method",
    "param",
    "mask_size",
    "mae",
    "mae_weighted",
    "mae_linear",
    "mae_ratio",
    "mean_abs_h_on_m",
    "bound",
    "bound_holds",
    "alpha_in_range",
    "converged",
    "iterations",
]

TrialKey = Tuple[int, str, float]


@dataclass
class TrialOutcome:
    seed: int
    method: str
    param: float
    g: Signal
    converged: bool = True
    iterations: int = 0


@dataclass
class BenchResult:
    n: int
    rows: List[dict] = field(default_factory=list)
    error_diffs: Dict[TrialKey, List[Tuple[int, float]]] = field(default_factory=dict)
    summary: Dict[str, dict] = field(default_factory=dict)

    @property
    def all_converged(self) -> bool:
        return all(bool(row["converged"]) for row in self.rows)


class _OutcomeStore:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._outcomes: Dict[TrialKey, TrialOutcome] = {}

    def add(self, outcome: TrialOutcome) -> None:
        with self._lock:
            self._outcomes[(outcome.seed, outcome.method, outcome.param)] = outcome

    def get(self, key: TrialKey) -> TrialOutcome:
        with self._lock:
            return self._outcomes[key]

    def keys(self) -> List[TrialKey]:
        with self._lock:
            return sorted(self._outcomes)


def load_truth(config: ImputeConfig) -> Signal:
    bench = config.bench
    if bench.dataset == "beer":
        values = datasets.fetch_beer(limit=bench.limit)
        return Signal.time(values)
    if not os.path.exists(bench.dataset):
        raise ConfigError(f"dataset not found: {bench.dataset}")
    data = series_io.read_series(bench.dataset)
    data.values = series_io.take(data.values, bench.limit)
    return series_io.complete_signal(data, "benchmark dataset")


def draw_mask(config: ImputeConfig, n: int, seed: int) -> Mask:
    bench = config.bench
    if bench.mask_model == "generic":
        return generic_mask(n, bench.p, seed, gamma0=config.constants.gamma0)
    size = bench.size if bench.size is not None else int(round(bench.p * n))
    return uniform_mask(n, size, seed)


def plan_trials(config: ImputeConfig) -> List[Tuple[int, str, float]]:
    bench = config.bench
    unknown = [m for m in bench.methods if m not in METHODS]
    if unknown:
        raise ConfigError(f"unknown bench methods {unknown}; choose from {list(METHODS)}")
    if not bench.seeds:
        raise ConfigError("bench.seeds must not be empty")
    trials = []
    methods = sorted(set(bench.methods) | {"linear"})
    for seed in bench.seeds:
        for method in methods:
            if method == "l1-loose":
                params = bench.alpha_grid
            elif method == "l1-noisy":
                params = bench.noise_delta_grid
            else:
                params = [0.0]
            if not params:
                raise ConfigError(f"{method} needs a non-empty parameter grid")
            for param in params:
                trials.append((int(seed), method, float(param)))
    return sorted(trials)


def run_trial(config: ImputeConfig, truth: Signal, mask: Mask, seed: int, method: str, param: float) -> TrialOutcome:
    observed = Signal.time(np.where(mask.boolean(), 0.0, truth.values))
    if method == "linear":
        g = baselines.linear_interpolation(observed, mask, cyclic=config.baselines.cyclic)
        return TrialOutcome(seed, method, param, g)
    if method == "trig":
        g = baselines.trig_poly_regression(observed, mask, config.baselines.harmonics)
        return TrialOutcome(seed, method, param, g)
    if method == "l1-exact":
        result = solver.impute_exact(observed, mask, config.solver)
    elif method == "l1-loose":
        result = solver.impute_loose(observed, mask, param, config.solver)
    else:
        result = solver.impute_noisy(observed, mask, param, config.solver)
    return TrialOutcome(seed, method, param, result.g, result.converged, result.iterations)


def default_s_size(config: ImputeConfig, n: int) -> int:
    if config.diagnostics.s_size is not None:
        return int(config.diagnostics.s_size)
    return max(1, int(math.ceil(n / 20.0)))


def _bound_for(
    method: str,
    param: float,
    report: diagnostics.DiagnosticsReport,
    n: int,
) -> Optional[float]:
    try:
        if method == "l1-exact":
            return diagnostics.bound_quantitative(report.epsilon, report.delta)
        if method == "l1-loose":
            return diagnostics.bound_loose(report.epsilon, report.delta, report.delta_prime, param, n)
        if method == "l1-noisy":
            return diagnostics.bound_random_noisy(report.epsilon, param)
    except ImputeError:
        return None
    return None


def _alpha_in_range(method: str, param: float, report: diagnostics.DiagnosticsReport, n: int) -> Optional[bool]:
    # The loose certificate is only proven for alpha <= 2 eps / (N delta').
    if method != "l1-loose":
        return None
    return diagnostics.alpha_in_range(report.epsilon, report.delta_prime, param, n)


def _bound_lhs(method: str, truth: Signal, g: Signal, mask: Mask) -> float:
    h = np.abs(truth.values - g.values)
    if method == "l1-loose":
        return float(h.sum()) / mask.size
    return float(h[mask.array()].mean())


def run_bench(config: ImputeConfig, truth: Optional[Signal] = None) -> BenchResult:
    truth = truth if truth is not None else load_truth(config)
    n = truth.n
    trials = plan_trials(config)
    masks = {seed: draw_mask(config, n, seed) for seed in sorted({t[0] for t in trials})}
    store = _OutcomeStore()

    _LOGGER.info(
        "Bench starting. n=%s trials=%s workers=%s ts=%s", n, len(trials), config.bench.workers, log_timestamp()
    )

    def _work(trial: Tuple[int, str, float]) -> None:
        seed, method, param = trial
        outcome = run_trial(config, truth, masks[seed], seed, method, param)
        store.add(outcome)
        _LOGGER.info(
            "Trial finished. seed=%s method=%s param=%s converged=%s", seed, method, param, outcome.converged
        )

    workers = max(1, int(config.bench.workers or 1))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # list() re-raises the first trial exception here.
        list(pool.map(_work, trials))

    s_size = default_s_size(config, n)
    mean_abs_f = float(np.mean(np.abs(truth.values)))
    params = dict(config.constants.__dict__)
    if config.bench.mask_model == "generic":
        params["p"] = config.bench.p
    reports = {
        seed: diagnostics.full_report(truth, mask, s_size, params)
        for seed, mask in masks.items()
    }
    result = BenchResult(n=n)
    for key in store.keys():
        seed, method, param = key
        outcome = store.get(key)
        mask = masks[seed]
        linear = store.get((seed, "linear", 0.0))
        report = evaluation.evaluate(truth, outcome.g, mask, baseline=linear.g)
        bound = _bound_for(method, param, reports[seed], n)
        in_range = _alpha_in_range(method, param, reports[seed], n)
        holds = None
        if bound is not None and in_range is not False:
            holds = _bound_lhs(method, truth, outcome.g, mask) <= bound * mean_abs_f + 1e-6 * float(
                np.abs(truth.values).max()
            )
            if not holds:
                _LOGGER.warning(
                    "Bound not met. seed=%s method=%s param=%s talagrand=%s",
                    seed,
                    method,
                    param,
                    reports[seed].thresholds.get("talagrand"),
                )
        result.rows.append(
            {
                "seed": seed,
                "method": method,
                "param": param,
                "mask_size": mask.size,
                "mae": report.mae,
                "mae_weighted": report.mae_weighted,
                "mae_linear": report.mae_baseline,
                "mae_ratio": report.mae_ratio,
                "mean_abs_h_on_m": report.mean_abs_h_on_M,
                "bound": bound,
                "bound_holds": holds,
                "alpha_in_range": in_range,
                "converged": outcome.converged,
                "iterations": outcome.iterations,
            }
        )
        if method != "linear":
            result.error_diffs[key] = list(zip(mask.indices, report.error_diff))
    result.summary = summarize(result.rows)
    _LOGGER.info("Bench finished. rows=%s ts=%s", len(result.rows), log_timestamp())
    return result


def summarize(rows: List[dict]) -> Dict[str, dict]:
    groups: Dict[str, List[float]] = {}
    for row in rows:
        if row["method"] == "linear" or row["mae_ratio"] is None:
            continue
        label = f"{row['method']}@{row['param']:g}"
        groups.setdefault(label, []).append(float(row["mae_ratio"]))
    return {
        label: {
            "median_ratio": statistics.median(ratios),
            "min_ratio": min(ratios),
            "max_ratio": max(ratios),
            "seeds": len(ratios),
        }
        for label, ratios in sorted(groups.items())
    }


def write_outputs(result: BenchResult, output_dir: str) -> List[str]:
    os.makedirs(output_dir, exist_ok=True)
    written = []
    path = os.path.join(output_dir, "results.csv")
    series_io.write_table(path, result.rows, RESULT_COLUMNS)
    written.append(path)

    ratio_rows = [
        {"seed": r["seed"], "method": r["method"], "param": r["param"], "ratio": r["mae_ratio"]}
        for r in result.rows
        if r["method"] != "linear"
    ]
    path = os.path.join(output_dir, "ratios.csv")
    series_io.write_table(path, ratio_rows, ["seed", "method", "param", "ratio"])
    written.append(path)

    by_method: Dict[str, List[dict]] = {}
    for (seed, method, param), pairs in sorted(result.error_diffs.items()):
        for index, value in pairs:
            by_method.setdefault(method, []).append(
                {"seed": seed, "param": param, "index": index, "value": value}
            )
    for method, rows in sorted(by_method.items()):
        path = os.path.join(output_dir, f"error_diff_{method}.csv")
        series_io.write_table(path, rows, ["seed", "param", "index", "value"])
        written.append(path)

    path = os.path.join(output_dir, "summary.json")
    series_io.write_json(path, {"n": result.n, "methods": result.summary})
    written.append(path)
    return written
