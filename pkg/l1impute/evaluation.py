"""Imputation error metrics over the missing set M.

All metrics use the complex modulus, so they apply unchanged to complex
series; real pipelines simply have zero imaginary parts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from .errors import DataError, ParameterError
from .mask import Mask
from .spectral import Signal


@dataclass
class EvaluationReport:
    mae: float
    mae_weighted: Optional[float]
    mean_abs_h_on_M: float
    mean_abs_f: float
    error_diff: List[float] = field(default_factory=list)
    mae_baseline: Optional[float] = None
    mae_ratio: Optional[float] = None


def _check(truth: Signal, mask: Mask, *others: Signal) -> np.ndarray:
    for other in others:
        if other.n != truth.n:
            raise ParameterError(f"length mismatch: {truth.n} != {other.n}")
    if mask.n != truth.n:
        raise ParameterError(f"mask length {mask.n} does not match signal length {truth.n}")
    return mask.array()


def mae(truth: Signal, imputed: Signal, mask: Mask) -> float:
    idx = _check(truth, mask, imputed)
    if idx.size == 0:
        raise ParameterError("MAE over an empty mask is undefined")
    return float(np.mean(np.abs(truth.values[idx] - imputed.values[idx])))


def mae_weighted(truth: Signal, imputed: Signal, mask: Mask) -> float:
    idx = _check(truth, mask, imputed)
    denominator = float(np.abs(truth.values[idx]).sum())
    if denominator == 0.0:
        raise DataError("the true values on the mask sum to zero in absolute value")
    return float(np.abs(truth.values[idx] - imputed.values[idx]).sum()) / denominator


def error_diff_series(truth: Signal, g1: Signal, g2: Signal, mask: Mask) -> List[float]:
    """|f - g1| - |f - g2| on M in index order; positive where g2 beats g1."""
    idx = _check(truth, mask, g1, g2)
    t = truth.values[idx]
    diff = np.abs(t - g1.values[idx]) - np.abs(t - g2.values[idx])
    return [float(v) for v in diff]


def empirical_mean_gap(f: Signal, mask: Mask) -> float:
    idx = _check(f, mask)
    if idx.size == 0:
        raise ParameterError("the mean over an empty mask is undefined")
    mags = np.abs(f.values)
    return abs(float(mags[idx].mean()) - float(mags.mean()))


def evaluate(
    truth: Signal,
    imputed: Signal,
    mask: Mask,
    baseline: Optional[Signal] = None,
) -> EvaluationReport:
    idx = _check(truth, mask, imputed)
    error = mae(truth, imputed, mask)
    try:
        weighted: Optional[float] = mae_weighted(truth, imputed, mask)
    except DataError:
        weighted = None
    report = EvaluationReport(
        mae=error,
        mae_weighted=weighted,
        mean_abs_h_on_M=float(np.mean(np.abs(truth.values[idx] - imputed.values[idx]))),
        mean_abs_f=float(np.mean(np.abs(truth.values))),
    )
    if baseline is not None:
        report.error_diff = error_diff_series(truth, baseline, imputed, mask)
        report.mae_baseline = mae(truth, baseline, mask)
        if report.mae_baseline > 0:
            report.mae_ratio = error / report.mae_baseline
    return report


def report_to_dict(report: EvaluationReport) -> Dict[str, Any]:
    return {
        "mae": report.mae,
        "mae_weighted": report.mae_weighted,
        "mean_abs_h_on_m": report.mean_abs_h_on_M,
        "mean_abs_f": report.mean_abs_f,
        "mae_baseline": report.mae_baseline,
        "mae_ratio": report.mae_ratio,
        "error_diff": list(report.error_diff),
    }
