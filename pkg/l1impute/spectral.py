"""Unitary discrete Fourier transform on Z_N and the norm conventions.

Both directions carry the symmetric N^{-1/2} factor:

    dft(f)(w)  = N^{-1/2} sum_x f(x) exp(-2 pi i w x / N)
    idft(F)(x) = N^{-1/2} sum_w F(w) exp(+2 pi i w x / N)

Power-of-two lengths use an iterative radix-2 transform; every other length
goes through Bluestein's chirp-z reduction onto a power-of-two convolution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Optional, Tuple

import numpy as np

from .errors import ParameterError


class Domain(str, Enum):
    TIME = "time"
    FREQUENCY = "frequency"


class NormKind(str, Enum):
    # Counting norms sum over Z_N; the mu norms carry the 1/N prefactor.
    L1_COUNTING = "l1"
    L2_COUNTING = "l2"
    L1_MU = "l1_mu"
    L2_MU = "l2_mu"
    LINF = "linf"


@dataclass(frozen=True, eq=False)
class Signal:
    values: np.ndarray
    domain: Domain = Domain.TIME
    n: int = field(init=False)

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.complex128).reshape(-1)
        if values.size < 1:
            raise ParameterError("a signal needs at least one value")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "n", int(values.size))
        object.__setattr__(self, "domain", Domain(self.domain))

    @classmethod
    def time(cls, values) -> "Signal":
        return cls(values, Domain.TIME)

    @classmethod
    def frequency(cls, values) -> "Signal":
        return cls(values, Domain.FREQUENCY)

    def is_real(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.values.imag) <= tol))

    def _check_compatible(self, other: "Signal") -> None:
        if not isinstance(other, Signal):
            raise ParameterError("expected a Signal")
        if other.n != self.n:
            raise ParameterError(f"length mismatch: {self.n} != {other.n}")
        if other.domain != self.domain:
            raise ParameterError(f"domain mismatch: {self.domain.value} != {other.domain.value}")

    def __add__(self, other: "Signal") -> "Signal":
        self._check_compatible(other)
        return Signal(self.values + other.values, self.domain)

    def __sub__(self, other: "Signal") -> "Signal":
        self._check_compatible(other)
        return Signal(self.values - other.values, self.domain)

    def __mul__(self, scalar: complex) -> "Signal":
        return Signal(self.values * scalar, self.domain)

    __rmul__ = __mul__

    def __len__(self) -> int:
        return self.n


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@lru_cache(maxsize=64)
def _bit_reversal(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    rev.setflags(write=False)
    return rev


@lru_cache(maxsize=64)
def _twiddles(size: int) -> np.ndarray:
    tw = np.exp(-2j * np.pi * np.arange(size // 2) / size)
    tw.setflags(write=False)
    return tw


def _fft_radix2(x: np.ndarray) -> np.ndarray:
    """Unnormalized forward transform, len(x) a power of two."""
    n = x.size
    out = x[_bit_reversal(n)]
    size = 2
    while size <= n:
        half = size // 2
        blocks = out.reshape(-1, size)
        even = blocks[:, :half]
        odd = blocks[:, half:] * _twiddles(size)
        out = np.concatenate((even + odd, even - odd), axis=1).reshape(n)
        size *= 2
    return out


def _ifft_radix2(x: np.ndarray) -> np.ndarray:
    # Unnormalized inverse.
    return np.conj(_fft_radix2(np.conj(x)))


@lru_cache(maxsize=64)
def _bluestein_plan(n: int) -> Tuple[np.ndarray, np.ndarray, int]:
    m = 1 << (2 * n - 1).bit_length()
    k = np.arange(n, dtype=np.int64)
    # k^2 mod 2N keeps the chirp phase exact for large N.
    chirp = np.exp(-1j * np.pi * ((k * k) % (2 * n)) / n)
    kernel = np.zeros(m, dtype=np.complex128)
    kernel[:n] = np.conj(chirp)
    if n > 1:
        kernel[-(n - 1):] = np.conj(chirp[1:n])[::-1]
    kernel_hat = _fft_radix2(kernel)
    chirp.setflags(write=False)
    kernel_hat.setflags(write=False)
    return chirp, kernel_hat, m


def _fft_bluestein(x: np.ndarray) -> np.ndarray:
    n = x.size
    chirp, kernel_hat, m = _bluestein_plan(n)
    padded = np.zeros(m, dtype=np.complex128)
    padded[:n] = x * chirp
    conv = _ifft_radix2(_fft_radix2(padded) * kernel_hat) / m
    return conv[:n] * chirp


def _fft(x: np.ndarray) -> np.ndarray:
    if _is_power_of_two(x.size):
        return _fft_radix2(x)
    return _fft_bluestein(x)


def unitary_fft(values: np.ndarray) -> np.ndarray:
    """Forward unitary transform on a raw complex array."""
    x = np.asarray(values, dtype=np.complex128)
    return _fft(x) / np.sqrt(x.size)


def unitary_ifft(values: np.ndarray) -> np.ndarray:
    """Inverse unitary transform on a raw complex array."""
    x = np.asarray(values, dtype=np.complex128)
    return np.conj(_fft(np.conj(x))) / np.sqrt(x.size)


def _require_domain(signal: Signal, domain: Domain, op: str) -> None:
    if signal.domain != domain:
        raise ParameterError(f"{op} expects a {domain.value}-domain signal, got {signal.domain.value}")


def dft(f: Signal) -> Signal:
    _require_domain(f, Domain.TIME, "dft")
    return Signal(unitary_fft(f.values), Domain.FREQUENCY)


def idft(F: Signal) -> Signal:
    _require_domain(F, Domain.FREQUENCY, "idft")
    return Signal(unitary_ifft(F.values), Domain.TIME)


def character_table(n: int) -> np.ndarray:
    """chi(x*w) = exp(-2 pi i x w / N) as an N x N matrix indexed [w, x]."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    idx = np.arange(n, dtype=np.int64)
    return np.exp(-2j * np.pi * (np.outer(idx, idx) % n) / n)


def dft_direct(f: Signal) -> Signal:
    _require_domain(f, Domain.TIME, "dft_direct")
    return Signal(character_table(f.n) @ f.values / np.sqrt(f.n), Domain.FREQUENCY)


def idft_direct(F: Signal) -> Signal:
    _require_domain(F, Domain.FREQUENCY, "idft_direct")
    return Signal(np.conj(character_table(F.n)) @ F.values / np.sqrt(F.n), Domain.TIME)


def _restrict(u: Signal, on: Optional[Iterable[int]]) -> np.ndarray:
    if on is None:
        return u.values
    idx = np.asarray(sorted(set(int(i) for i in on)), dtype=np.int64)
    if idx.size and (idx[0] < 0 or idx[-1] >= u.n):
        raise ParameterError(f"index set not contained in 0..{u.n - 1}")
    return u.values[idx]


def norm(u: Signal, kind: NormKind = NormKind.L1_COUNTING, on: Optional[Iterable[int]] = None) -> float:
    kind = NormKind(kind)
    mags = np.abs(_restrict(u, on))
    if kind == NormKind.LINF:
        return float(mags.max()) if mags.size else 0.0
    if kind in (NormKind.L1_COUNTING, NormKind.L1_MU):
        total = float(mags.sum())
        return total / u.n if kind == NormKind.L1_MU else total
    total = float(np.sqrt(np.sum(mags * mags)))
    return total / np.sqrt(u.n) if kind == NormKind.L2_MU else total


def spectral_support(F: Signal, rel_tol: float = 1e-9) -> Tuple[int, ...]:
    mags = np.abs(F.values)
    peak = float(mags.max())
    if peak == 0.0:
        return ()
    return tuple(int(i) for i in np.flatnonzero(mags > rel_tol * peak))
