"""Missing-index sets M on Z_N and the seeded random models that draw them.

Randomness comes from SplitMix64 so a mask can be reproduced bit-for-bit in
any language from (n, p or size, seed):

    state += 0x9E3779B97F4A7C15
    z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out = z ^ (z >> 31)                      (all arithmetic mod 2^64)

A float in [0, 1) is ``(out >> 11) * 2^-53``; an integer below k is
``(out * k) >> 64``.
"""

from __future__ import annotations

import logging
import math
import os
import re
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .errors import DataError, ParameterError
from .spectral import Domain, Signal


_LOGGER = logging.getLogger("l1impute.mask")

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_HEADER_PATTERN = re.compile(r"^#\s*n\s*=\s*(\d+)\s*$")


class SplitMix64:
    def __init__(self, seed: int) -> None:
        self._state = int(seed) & _MASK64

    def next_uint64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        return (self.next_uint64() >> 11) * 2.0 ** -53

    def next_below(self, k: int) -> int:
        if k < 1:
            raise ParameterError("bound must be >= 1")
        return (self.next_uint64() * k) >> 64

    def uint64s(self, count: int) -> np.ndarray:
        # Same stream as `count` calls to next_uint64; uint64 array ops wrap mod 2^64.
        steps = np.arange(1, count + 1, dtype=np.uint64)
        z = np.uint64(self._state) + steps * np.uint64(_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        z = z ^ (z >> np.uint64(31))
        self._state = (self._state + count * _GAMMA) & _MASK64
        return z

    def floats(self, count: int) -> np.ndarray:
        return (self.uint64s(count) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53


@dataclass(frozen=True)
class Mask:
    n: int
    indices: Tuple[int, ...]
    redraws: int = field(default=0, compare=False)

    def __post_init__(self) -> None:
        if int(self.n) < 1:
            raise ParameterError("mask length n must be >= 1")
        indices = tuple(int(i) for i in self.indices)
        for prev, cur in zip(indices, indices[1:]):
            if cur <= prev:
                raise ParameterError("mask indices must be strictly increasing")
        if indices and (indices[0] < 0 or indices[-1] >= self.n):
            raise ParameterError(f"mask indices must lie in 0..{self.n - 1}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "indices", indices)

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> "Mask":
        items = [int(i) for i in indices]
        if len(set(items)) != len(items):
            raise ParameterError("mask indices must be distinct")
        return cls(n, tuple(sorted(items)))

    @classmethod
    def empty(cls, n: int) -> "Mask":
        return cls(n, ())

    @property
    def size(self) -> int:
        return len(self.indices)

    def __len__(self) -> int:
        return self.size

    def __contains__(self, index: object) -> bool:
        if not isinstance(index, (int, np.integer)):
            return False
        pos = bisect_left(self.indices, int(index))
        return pos < len(self.indices) and self.indices[pos] == index

    def array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=np.int64)

    def boolean(self) -> np.ndarray:
        flags = np.zeros(self.n, dtype=bool)
        flags[self.array()] = True
        return flags

    def complement(self) -> Tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(~self.boolean()))


def random_size_limit(n: int, gamma0: float) -> float:
    """gamma0 * N / ln N, the largest |M| the random-mask bounds speak about."""
    if n < 2:
        return 0.0
    return gamma0 * n / math.log(n)


def _check_probability(p: float) -> None:
    if not (0.0 < float(p) < 1.0):
        raise ParameterError(f"p must lie strictly between 0 and 1, got {p}")


def generic_mask(
    n: int,
    p: float,
    seed: int,
    *,
    gamma0: Optional[float] = None,
    max_redraws: int = 100_000,
) -> Mask:
    """Include each index independently with probability p.

    Draws that come out empty or full are discarded and the stream continues;
    the number of discarded draws is kept on ``Mask.redraws``.
    """
    _check_probability(p)
    if n < 2:
        raise ParameterError("generic_mask needs n >= 2 so that M and its complement are nonempty")
    rng = SplitMix64(seed)
    redraws = 0
    while True:
        hits = np.flatnonzero(rng.floats(n) < p)
        if 0 < hits.size < n:
            break
        redraws += 1
        _LOGGER.debug("Degenerate generic mask redrawn. n=%s p=%s size=%s", n, p, hits.size)
        if redraws >= max_redraws:
            raise ParameterError(f"p={p} produced {redraws} degenerate draws for n={n}")
    mask = Mask(n, tuple(int(i) for i in hits), redraws=redraws)
    if gamma0 is not None and mask.size > random_size_limit(n, gamma0):
        _LOGGER.warning(
            "Generic mask exceeds gamma0*N/ln(N). size=%s limit=%.3f gamma0=%s",
            mask.size,
            random_size_limit(n, gamma0),
            gamma0,
        )
    return mask


def uniform_mask(n: int, size: int, seed: int) -> Mask:
    if not (1 <= size <= n - 1):
        raise ParameterError(f"size must lie in 1..{n - 1}, got {size}")
    rng = SplitMix64(seed)
    perm = list(range(n))
    for i in range(size):
        j = i + rng.next_below(n - i)
        perm[i], perm[j] = perm[j], perm[i]
    return Mask(n, tuple(sorted(perm[:size])))


def _is_absent(value) -> bool:
    if value is None:
        return True
    try:
        return math.isnan(float(value))
    except (TypeError, ValueError):
        raise DataError(f"not a number: {value!r}")


def mask_from_missing_values(series: Sequence[Optional[float]]) -> Tuple[Signal, Mask]:
    absent = [_is_absent(v) for v in series]
    if not absent:
        raise DataError("empty series")
    if all(absent):
        raise DataError("every value in the series is missing")
    values = [0.0 if gone else float(v) for v, gone in zip(series, absent)]
    missing = tuple(i for i, gone in enumerate(absent) if gone)
    return Signal(values, Domain.TIME), Mask(len(values), missing)


def mask_to_text(mask: Mask) -> str:
    lines = [f"# n={mask.n}"] + [str(i) for i in mask.indices]
    return "\n".join(lines) + "\n"


def mask_from_text(text: str) -> Mask:
    lines = [line.strip() for line in (text or "").splitlines()]
    lines = [line for line in lines if line]
    if not lines:
        raise DataError("mask text is empty")
    match = _HEADER_PATTERN.match(lines[0])
    if not match:
        raise DataError(f"mask header must look like '# n=<N>', got {lines[0]!r}")
    n = int(match.group(1))
    try:
        indices = [int(line) for line in lines[1:]]
    except ValueError as exc:
        raise DataError(f"mask index is not an integer ({exc})")
    try:
        return Mask.from_indices(n, indices)
    except ParameterError as exc:
        raise DataError(str(exc))


def save_mask(path: str, mask: Mask) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        handle.write(mask_to_text(mask))


def load_mask(path: str) -> Mask:
    with open(path, "r", encoding="ascii") as handle:
        return mask_from_text(handle.read())
