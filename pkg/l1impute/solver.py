"""L1 Fourier minimization programs solved by Douglas-Rachford splitting.

Every program here has the shape

    minimize  ||T u||_1   subject to  u in C

with T a unitary transform and C a closed convex set that is cheap to
project onto. Splitting the indicator of C from the L1 term gives the
relaxed iteration on the governing sequence z:

    x = P_C(z)
    y = T^{-1} shrink(T(2x - z), gamma)
    z = z + lambda * (y - x)

The returned point is x, so it always satisfies the constraint up to
rounding. The run stops once ||z_{k+1} - z_k||_2 / (1 + ||z_k||_2) < tol
and the feasibility gap of x is below ``feasibility_tol * (1 + ||f||_inf)``.

gamma is ``threshold_step`` times the median of |T u0| (the mean when the
median is zero, 1.0 when both are) and stays fixed for the whole run.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Tuple

import numpy as np

from .config import SolverConfig, log_timestamp
from .errors import DataError, ParameterError
from .mask import Mask
from .spectral import Domain, NormKind, Signal, norm, unitary_fft, unitary_ifft


_LOGGER = logging.getLogger("l1impute.solver")

STATUS_CONVERGED = "converged"
STATUS_MAX_ITERS = "max_iters"

Projection = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SolverResult:
    g: Signal
    objective: float
    h: Signal
    iterations: int
    converged: bool
    feasibility_gap: float
    status: str = STATUS_CONVERGED
    imag_discarded: float = 0.0
    alpha: float = 0.0

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "iterations": self.iterations,
            "converged": self.converged,
            "status": self.status,
            "feasibility_gap": self.feasibility_gap,
            "imag_discarded": self.imag_discarded,
            "alpha": self.alpha,
        }


def soft_threshold(z: np.ndarray, gamma: float) -> np.ndarray:
    """Complex shrinkage z * max(1 - gamma/|z|, 0), with 0 mapped to 0."""
    z = np.asarray(z, dtype=np.complex128)
    mags = np.abs(z)
    scale = np.zeros_like(mags)
    np.divide(gamma, mags, out=scale, where=mags > 0)
    return z * np.maximum(1.0 - scale, 0.0)


def _project_simplex(mags: np.ndarray, radius: float) -> np.ndarray:
    # Sorting-based projection of a nonnegative vector onto {m >= 0, sum(m) = radius}.
    desc = np.sort(mags)[::-1]
    cums = np.cumsum(desc)
    theta = (cums - radius) / np.arange(1, desc.size + 1)
    active = np.flatnonzero(desc - theta > 0)
    cut = theta[active[-1]] if active.size else 0.0
    return np.maximum(mags - cut, 0.0)


def project_l1_ball(v: np.ndarray, radius: float) -> np.ndarray:
    """Euclidean projection onto {w : sum |w_i| <= radius}, phases kept."""
    if radius < 0:
        raise ParameterError("radius must be >= 0")
    v = np.asarray(v)
    mags = np.abs(v)
    if mags.sum() <= radius:
        return v.copy()
    if radius == 0:
        return np.zeros_like(v)
    shrunk = _project_simplex(mags, radius)
    scale = np.zeros_like(mags)
    np.divide(shrunk, mags, out=scale, where=mags > 0)
    return v * scale


def residual(f: Signal, g: Signal) -> Signal:
    if not isinstance(f, Signal) or not isinstance(g, Signal):
        raise ParameterError("residual expects two signals")
    return f - g


def _step_scale(start: np.ndarray, forward: Callable[[np.ndarray], np.ndarray]) -> float:
    mags = np.abs(forward(start))
    scale = float(np.median(mags))
    if scale <= 0.0:
        scale = float(mags.mean())
    return scale if scale > 0.0 else 1.0


def _douglas_rachford(
    start: np.ndarray,
    project: Projection,
    gap: Callable[[np.ndarray], float],
    gap_limit: float,
    forward: Callable[[np.ndarray], np.ndarray],
    inverse: Callable[[np.ndarray], np.ndarray],
    cfg: SolverConfig,
) -> Tuple[np.ndarray, int, bool]:
    gamma = cfg.threshold_step * _step_scale(start, forward)
    lam = cfg.relaxation
    z = start.astype(np.complex128, copy=True)
    x = project(z)
    for iteration in range(1, cfg.max_iters + 1):
        y = inverse(soft_threshold(forward(2.0 * x - z), gamma))
        step = lam * (y - x)
        z = z + step
        change = np.linalg.norm(step) / (1.0 + np.linalg.norm(z - step))
        x = project(z)
        if change < cfg.tol and gap(x) <= gap_limit:
            return x, iteration, True
    return x, cfg.max_iters, False


def _validate_problem(f: Signal, mask: Mask) -> None:
    if f.domain != Domain.TIME:
        raise ParameterError("the observed series must be a time-domain signal")
    if mask.n != f.n:
        raise ParameterError(f"mask length {mask.n} does not match signal length {f.n}")
    if mask.size >= f.n:
        raise ParameterError("at least one value must be observed")
    if not np.all(np.isfinite(f.values[~mask.boolean()])):
        raise DataError("the observed series contains NaN or Inf")


def _starting_point(f: Signal, observed: np.ndarray, missing: np.ndarray) -> np.ndarray:
    start = np.array(f.values, dtype=np.complex128)
    start[missing] = f.values[observed].mean()
    return start


def _finish(
    f: Signal,
    x: np.ndarray,
    iterations: int,
    converged: bool,
    gap: Callable[[np.ndarray], float],
    alpha: float,
    label: str,
) -> SolverResult:
    imag_discarded = 0.0
    if f.domain == Domain.TIME and f.is_real():
        imag_discarded = float(np.max(np.abs(x.imag)))
        x = x.real.astype(np.complex128)
    g = Signal(x, f.domain)
    if g.domain == Domain.TIME:
        objective = norm(Signal(unitary_fft(g.values), Domain.FREQUENCY), NormKind.L1_COUNTING)
    else:
        objective = norm(Signal(unitary_ifft(g.values), Domain.TIME), NormKind.L1_COUNTING)
    status = STATUS_CONVERGED if converged else STATUS_MAX_ITERS
    result = SolverResult(
        g=g,
        objective=objective,
        h=residual(f, g),
        iterations=iterations,
        converged=converged,
        feasibility_gap=float(gap(g.values)),
        status=status,
        imag_discarded=imag_discarded,
        alpha=alpha,
    )
    if converged:
        _LOGGER.info(
            "%s solve finished. n=%s iterations=%s objective=%.6g gap=%.3g ts=%s",
            label,
            f.n,
            iterations,
            objective,
            result.feasibility_gap,
            log_timestamp(),
        )
    else:
        _LOGGER.warning(
            "%s solve did not converge. n=%s max_iters=%s objective=%.6g gap=%.3g ts=%s",
            label,
            f.n,
            iterations,
            objective,
            result.feasibility_gap,
            log_timestamp(),
        )
    return result


def _trivial(f: Signal, label: str) -> SolverResult:
    _LOGGER.debug("%s solve skipped, nothing is missing. n=%s", label, f.n)
    return SolverResult(
        g=f,
        objective=norm(Signal(unitary_fft(f.values), Domain.FREQUENCY), NormKind.L1_COUNTING),
        h=residual(f, f),
        iterations=0,
        converged=True,
        feasibility_gap=0.0,
    )


def impute_exact(f: Signal, mask: Mask, cfg: Optional[SolverConfig] = None) -> SolverResult:
    """argmin ||u^||_1 over u with u = f off the mask."""
    return _impute_ball(f, mask, 0.0, cfg, "exact")


def impute_loose(f: Signal, mask: Mask, alpha: float, cfg: Optional[SolverConfig] = None) -> SolverResult:
    """argmin ||u^||_1 over u with sum_{M^c} |u - f| <= alpha * sum_{M^c} |f|."""
    if alpha < 0:
        raise ParameterError(f"alpha must be >= 0, got {alpha}")
    return _impute_ball(f, mask, float(alpha), cfg, "loose")


def impute_noisy(f: Signal, mask: Mask, noise_delta: float, cfg: Optional[SolverConfig] = None) -> SolverResult:
    """Random-mask noisy program: radius noise_delta / N times ||f||_{L1(M^c)}."""
    if noise_delta < 0:
        raise ParameterError(f"noise_delta must be >= 0, got {noise_delta}")
    return _impute_ball(f, mask, float(noise_delta) / f.n, cfg, "noisy")


def _impute_ball(f: Signal, mask: Mask, alpha: float, cfg: Optional[SolverConfig], label: str) -> SolverResult:
    cfg = (cfg or SolverConfig()).validate()
    _validate_problem(f, mask)
    if mask.size == 0:
        return _trivial(f, label)

    flags = mask.boolean()
    missing = np.flatnonzero(flags)
    observed = np.flatnonzero(~flags)
    f_obs = f.values[observed]
    radius = alpha * float(np.abs(f_obs).sum())
    gap_limit = cfg.feasibility_tol * (1.0 + float(np.abs(f.values[observed]).max()))

    if radius == 0.0:
        def project(u: np.ndarray) -> np.ndarray:
            out = u.copy()
            out[observed] = f_obs
            return out

        def gap(u: np.ndarray) -> float:
            return float(np.max(np.abs(u[observed] - f_obs)))
    else:
        def project(u: np.ndarray) -> np.ndarray:
            out = u.copy()
            out[observed] = f_obs + project_l1_ball(u[observed] - f_obs, radius)
            return out

        def gap(u: np.ndarray) -> float:
            return max(0.0, float(np.abs(u[observed] - f_obs).sum()) - radius)

    _LOGGER.debug(
        "%s solve starting. n=%s missing=%s alpha=%s radius=%.6g", label, f.n, mask.size, alpha, radius
    )
    start = _starting_point(f, observed, missing)
    x, iterations, converged = _douglas_rachford(
        start, project, gap, gap_limit, unitary_fft, unitary_ifft, cfg
    )
    return _finish(f, x, iterations, converged, gap, alpha, label)


def recover_spectrum(
    F: Signal,
    missing_frequencies: Iterable[int],
    cfg: Optional[SolverConfig] = None,
) -> SolverResult:
    """Fill unobserved Fourier coefficients by minimizing the time-domain L1 norm."""
    cfg = (cfg or SolverConfig()).validate()
    if F.domain != Domain.FREQUENCY:
        raise ParameterError("recover_spectrum expects a frequency-domain signal")
    if not np.all(np.isfinite(F.values)):
        raise DataError("the observed spectrum contains NaN or Inf")
    mask = Mask.from_indices(F.n, missing_frequencies)
    if mask.size >= F.n:
        raise ParameterError("at least one frequency must be observed")
    if mask.size == 0:
        return SolverResult(
            g=F,
            objective=norm(Signal(unitary_ifft(F.values), Domain.TIME), NormKind.L1_COUNTING),
            h=residual(F, F),
            iterations=0,
            converged=True,
            feasibility_gap=0.0,
        )

    flags = mask.boolean()
    observed = np.flatnonzero(~flags)
    F_obs = F.values[observed]
    gap_limit = cfg.feasibility_tol * (1.0 + float(np.abs(F_obs).max()))

    def project(v: np.ndarray) -> np.ndarray:
        out = v.copy()
        out[observed] = F_obs
        return out

    def gap(v: np.ndarray) -> float:
        return float(np.max(np.abs(v[observed] - F_obs)))

    start = np.array(F.values, dtype=np.complex128)
    start[flags] = 0.0
    x, iterations, converged = _douglas_rachford(
        start, project, gap, gap_limit, unitary_ifft, unitary_fft, cfg
    )
    return _finish(F, x, iterations, converged, gap, 0.0, "spectrum")
