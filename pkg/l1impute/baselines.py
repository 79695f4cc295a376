"""Reference imputers to compare L1 minimization against."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .errors import DataError, ParameterError
from .mask import Mask
from .spectral import Domain, Signal


def _observed_split(f: Signal, mask: Mask):
    if f.domain != Domain.TIME:
        raise ParameterError("baselines work on time-domain signals")
    if mask.n != f.n:
        raise ParameterError(f"mask length {mask.n} does not match signal length {f.n}")
    flags = mask.boolean()
    observed = np.flatnonzero(~flags)
    if observed.size == 0:
        raise ParameterError("at least one value must be observed")
    return flags, observed


def linear_interpolation(f: Signal, mask: Mask, *, cyclic: bool = False) -> Signal:
    """Fill each gap on the line through its nearest observed neighbours.

    Uses g(x) = f(a) + (f(b) - f(a)) / (b - a) * (x - a). Gaps at either end
    take the nearest observed value, unless ``cyclic`` wraps around Z_N.
    """
    flags, observed = _observed_split(f, mask)
    if not f.is_real():
        raise DataError("linear interpolation expects a real-valued series")
    if mask.size == 0:
        return f
    values = f.values.real
    missing = np.flatnonzero(flags)
    if cyclic:
        n = f.n
        xp = np.concatenate((observed - n, observed, observed + n))
        fp = np.tile(values[observed], 3)
        filled = np.interp(missing, xp, fp)
    else:
        # np.interp clamps to the end values outside the observed range.
        filled = np.interp(missing, observed, values[observed])
    out = values.copy()
    out[missing] = filled
    return Signal(out, Domain.TIME)


def default_harmonics(observed_count: int) -> int:
    if observed_count < 1:
        raise ParameterError("no observed points")
    k = max(1, observed_count // 10)
    return min(k, (observed_count - 1) // 2)


def design_matrix(x: np.ndarray, n: int, harmonics: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    columns = [np.ones_like(x)]
    for k in range(1, harmonics + 1):
        angle = 2.0 * np.pi * k * x / n
        columns.append(np.cos(angle))
        columns.append(np.sin(angle))
    return np.column_stack(columns)


def fit_coefficients(f: Signal, mask: Mask, harmonics: int) -> np.ndarray:
    """Coefficients (c0, a1, b1, ..., aK, bK) fitted by QR least squares on M^c."""
    _, observed = _observed_split(f, mask)
    if not f.is_real():
        raise DataError("trigonometric regression expects a real-valued series")
    if harmonics < 0:
        raise ParameterError("harmonics must be >= 0")
    if observed.size < 2 * harmonics + 1:
        raise ParameterError(
            f"{observed.size} observed points cannot determine {2 * harmonics + 1} coefficients"
        )
    q, r = np.linalg.qr(design_matrix(observed, f.n, harmonics))
    diag = np.abs(np.diag(r))
    if diag.min() <= 1e-12 * max(1.0, float(diag.max())):
        raise ParameterError("observed points do not determine the trigonometric fit")
    return np.linalg.solve(r, q.T @ f.values.real[observed])


def trig_poly_regression(f: Signal, mask: Mask, harmonics: Optional[int] = None) -> Signal:
    flags, observed = _observed_split(f, mask)
    if harmonics is None:
        harmonics = default_harmonics(observed.size)
    coeffs = fit_coefficients(f, mask, harmonics)
    fitted = design_matrix(np.arange(f.n), f.n, harmonics) @ coeffs
    out = f.values.real.copy()
    missing = np.flatnonzero(flags)
    out[missing] = fitted[missing]
    return Signal(out, Domain.TIME)
