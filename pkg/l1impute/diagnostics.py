"""Closed-form certificates for L1 Fourier imputation.

Concentration follows the 1/N scaling: F is concentrated on S with norm
<= eps when ||F||_{L1(S^c)} <= (eps / N) ||F||_{L1(Z_N)}. The tight eps is
therefore N * ||F||_{L1(S^c)} / ||F||_{L1} and lies in [0, N], not [0, 1].

All logarithms are natural. ``c_t``, ``c_q`` and ``gamma0`` are theoretical
constants with no known numeric value; callers supply them.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import DataError, DomainError, ParameterError
from .mask import Mask, random_size_limit
from .spectral import Domain, Signal, dft, spectral_support


_LOGGER = logging.getLogger("l1impute.diagnostics")

DEFAULT_PARAMETERS: Dict[str, float] = {
    "gamma0": 1.0,
    "c_t": 1.0,
    "c_q": 1.0,
    "q": 4.0,
    "t": 0.1,
    "alpha": 0.0,
    "noise_delta": 0.0,
    "support_tol": 1e-9,
    "mae_target": 0.2,
    "bourgain_eps": 1.0,
}


@dataclass(frozen=True)
class ConcentrationSet:
    n: int
    indices: Tuple[int, ...]
    epsilon: float


@dataclass
class DiagnosticsReport:
    n: int
    m_size: int
    s_size: int
    sigma_size: int
    epsilon: float
    delta: float
    delta_prime: float
    concentration_set: Tuple[int, ...]
    bounds: Dict[str, Optional[float]] = field(default_factory=dict)
    thresholds: Dict[str, Optional[bool]] = field(default_factory=dict)
    parameters: Dict[str, float] = field(default_factory=dict)
    hoeffding_tail: Optional[float] = None


def _l1_mass(F: Signal) -> float:
    total = float(np.abs(F.values).sum())
    if total == 0.0:
        raise DataError("the spectrum has zero L1 mass")
    return total


def concentration_epsilon(F: Signal, S: Iterable[int]) -> float:
    if F.domain != Domain.FREQUENCY:
        raise ParameterError("concentration is measured on a frequency-domain signal")
    total = _l1_mass(F)
    inside = np.zeros(F.n, dtype=bool)
    idx = [int(i) for i in S]
    if idx and (min(idx) < 0 or max(idx) >= F.n):
        raise ParameterError(f"index set not contained in 0..{F.n - 1}")
    inside[idx] = True
    outside = float(np.abs(F.values[~inside]).sum())
    return F.n * outside / total


def best_concentration_set(F: Signal, size: int) -> ConcentrationSet:
    if not (0 <= size <= F.n):
        raise ParameterError(f"size must lie in 0..{F.n}, got {size}")
    # Stable sort on -|F| keeps lower indices first among ties.
    order = np.argsort(-np.abs(F.values), kind="stable")
    chosen = tuple(sorted(int(i) for i in order[:size]))
    return ConcentrationSet(n=F.n, indices=chosen, epsilon=concentration_epsilon(F, chosen))


def _check_delta(delta: float) -> None:
    if delta < 0:
        raise ParameterError(f"delta must be >= 0, got {delta}")
    if delta >= 0.5:
        raise DomainError(f"delta = |M||S|/N must be < 1/2, got {delta}")


def bound_quantitative(epsilon: float, delta: float) -> float:
    """Multiplier of (1/N) sum |f| bounding (1/|M|) sum_M |h| for the exact program."""
    _check_delta(delta)
    return 2.0 * epsilon / (1.0 - 2.0 * delta)


def alpha_in_range(epsilon: float, delta_prime: float, alpha: float, n: int) -> bool:
    if alpha == 0:
        return True
    if delta_prime == 0:
        return True
    return alpha <= 2.0 * epsilon / (n * delta_prime)


def bound_loose(epsilon: float, delta: float, delta_prime: float, alpha: float, n: int) -> float:
    _check_delta(delta)
    if alpha < 0 or delta_prime < 0:
        raise ParameterError("alpha and delta_prime must be >= 0")
    if not alpha_in_range(epsilon, delta_prime, alpha, n):
        _LOGGER.info(
            "alpha outside the range the loose bound is proven for. alpha=%s limit=%.6g",
            alpha,
            2.0 * epsilon / (n * delta_prime),
        )
    return (2.0 * epsilon + 2.0 * n * alpha * delta_prime) / (1.0 - 2.0 * delta)


def bound_random(epsilon: float) -> float:
    if epsilon < 0:
        raise ParameterError("epsilon must be >= 0")
    return 4.0 * epsilon


def bound_random_noisy(epsilon: float, delta: float) -> float:
    # delta here is the noise level of the noisy program, not |M||S|/N.
    if epsilon < 0 or delta < 0:
        raise ParameterError("epsilon and delta must be >= 0")
    return 4.0 * epsilon + 2.0 * delta


def mae_budget(epsilon: float, noise_delta: float, target: float = 0.2) -> bool:
    return bound_random_noisy(epsilon, noise_delta) < target


def donoho_stark_threshold(e_size: int, s_size: int, n: int) -> bool:
    if e_size < 0 or s_size < 0 or n < 1:
        raise ParameterError("sizes must be >= 0 and n >= 1")
    return e_size * s_size < n / 2.0


def talagrand_condition(s_size: int, n: int, c_t: float) -> bool:
    if n < 16:
        raise DomainError(f"the Talagrand size condition needs N >= 16, got {n}")
    if c_t <= 0:
        raise ParameterError("c_t must be > 0")
    limit = n / (16.0 * c_t * c_t * math.log(n) * math.log(math.log(n)))
    return s_size < limit


def _check_q(q: float) -> None:
    if q <= 2:
        raise DomainError(f"q must exceed 2, got {q}")


def bourgain_threshold(sigma_size: int, n: int, q: float, c_q: float, eps: float) -> bool:
    _check_q(q)
    if c_q <= 0 or eps <= 0:
        raise ParameterError("c_q and eps must be > 0")
    exponent = 1.0 / (0.5 - 1.0 / q)
    return sigma_size < n / (2.0 * (c_q / eps) ** exponent)


def transference_threshold(e_size: int, n_total: int, q: float, c_q: float, eps: float) -> bool:
    _check_q(q)
    if c_q <= 0 or eps <= 0:
        raise ParameterError("c_q and eps must be > 0")
    exponent = 2.0 * q / (q - 2.0)
    return e_size < n_total / (4.0 * (c_q / eps) ** exponent)


def bourgain_mask_size(n: int, q: float) -> int:
    """ceil(N^{2/q}), the mask size the Lambda_q recovery statement presumes."""
    _check_q(q)
    return int(math.ceil(n ** (2.0 / q) - 1e-12))


def random_mask_size_ok(m_size: int, n: int, gamma0: float) -> bool:
    return m_size <= random_size_limit(n, gamma0)


def hoeffding_tail(t: float, p: float, n: int, f_inf: float) -> float:
    if t <= 0 or f_inf <= 0:
        raise ParameterError("t and f_inf must be > 0")
    if not (0.0 < p < 1.0):
        raise ParameterError("p must lie strictly between 0 and 1")
    base = 1.0 - p + p * math.exp(-2.0 * t * t / (f_inf * f_inf))
    return 2.0 * base ** n


def hoeffding_curve(ts: Sequence[float], p: float, n: int, f_inf: float) -> List[Tuple[float, float]]:
    return [(float(t) / f_inf, hoeffding_tail(float(t), p, n, f_inf)) for t in ts]


def _maybe(fn, *args):
    try:
        return fn(*args)
    except DomainError:
        return None


def full_report(
    f: Signal,
    mask: Mask,
    s_size: int,
    params: Optional[Mapping[str, Any]] = None,
) -> DiagnosticsReport:
    if f.domain != Domain.TIME:
        raise ParameterError("full_report expects a time-domain signal")
    if mask.n != f.n:
        raise ParameterError(f"mask length {mask.n} does not match signal length {f.n}")
    merged: Dict[str, float] = dict(DEFAULT_PARAMETERS)
    for key, value in (params or {}).items():
        if value is not None:
            merged[key] = float(value)
    n = f.n
    m_size = mask.size
    if "p" not in merged:
        merged["p"] = m_size / n

    F = dft(f)
    conc = best_concentration_set(F, s_size)
    epsilon = conc.epsilon
    delta = m_size * s_size / n
    delta_prime = (n - m_size) * s_size / n
    sigma = spectral_support(F, merged["support_tol"])
    alpha = merged["alpha"]
    noise_delta = merged["noise_delta"]
    q = merged["q"]

    bounds = {
        "quantitative": _maybe(bound_quantitative, epsilon, delta),
        "loose": _maybe(bound_loose, epsilon, delta, delta_prime, alpha, n),
        "random": bound_random(epsilon),
        "random_noisy": bound_random_noisy(epsilon, noise_delta),
    }
    thresholds = {
        "donoho_stark": donoho_stark_threshold(m_size, s_size, n),
        "talagrand": _maybe(talagrand_condition, s_size, n, merged["c_t"]),
        "bourgain": _maybe(bourgain_threshold, len(sigma), n, q, merged["c_q"], merged["bourgain_eps"]),
        "transference": _maybe(
            transference_threshold, len(sigma), n, q, merged["c_q"], merged["bourgain_eps"]
        ),
        "bourgain_mask_size": (
            None if q <= 2 else m_size == bourgain_mask_size(n, q)
        ),
        "random_mask_size": random_mask_size_ok(m_size, n, merged["gamma0"]),
        "mae_budget": mae_budget(epsilon, noise_delta, merged["mae_target"]),
        "alpha_in_range": alpha_in_range(epsilon, delta_prime, alpha, n),
    }
    if not thresholds["random_mask_size"]:
        _LOGGER.warning(
            "Mask larger than gamma0*N/ln(N). size=%s limit=%.3f gamma0=%s",
            m_size,
            random_size_limit(n, merged["gamma0"]),
            merged["gamma0"],
        )

    f_inf = float(np.abs(f.values).max())
    tail = None
    if f_inf > 0 and 0.0 < merged["p"] < 1.0 and merged["t"] > 0:
        tail = hoeffding_tail(merged["t"], merged["p"], n, f_inf)

    return DiagnosticsReport(
        n=n,
        m_size=m_size,
        s_size=s_size,
        sigma_size=len(sigma),
        epsilon=epsilon,
        delta=delta,
        delta_prime=delta_prime,
        concentration_set=conc.indices,
        bounds=bounds,
        thresholds=thresholds,
        parameters=merged,
        hoeffding_tail=tail,
    )


def report_to_dict(report: DiagnosticsReport) -> Dict[str, Any]:
    """Flat snake_case mapping: bounds as bound_<name>, thresholds as threshold_<name>."""
    out: Dict[str, Any] = {
        "n": report.n,
        "m_size": report.m_size,
        "s_size": report.s_size,
        "sigma_size": report.sigma_size,
        "epsilon": report.epsilon,
        "delta": report.delta,
        "delta_prime": report.delta_prime,
        "concentration_set": list(report.concentration_set),
        "hoeffding_tail": report.hoeffding_tail,
    }
    for name, value in report.bounds.items():
        out[f"bound_{name}"] = value
    for name, value in report.thresholds.items():
        out[f"threshold_{name}"] = value
    for name, value in report.parameters.items():
        out[f"param_{name}"] = value
    return out
