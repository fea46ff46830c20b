"""Deterministic prime generation: segmented sieve of Eratosthenes, served in blocks."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import ResourceLimitError

MAX_PRIMES = 2**31
DEFAULT_BLOCK_SIZE = 4096
SEGMENT_SPAN = 1 << 21  # integers per sieve segment

_SMALL_BOUNDS = (0, 2, 3, 5, 7, 11)  # p_n for n < 6


@dataclass(frozen=True, eq=False)
class PrimeBlock:
    """The primes p_start_index, p_start_index+1, ... in increasing order."""

    start_index: int
    primes: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.primes, dtype=np.uint64)
        arr.setflags(write=False)
        object.__setattr__(self, "primes", arr)

    def __len__(self) -> int:
        return len(self.primes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PrimeBlock):
            return NotImplemented
        return self.start_index == other.start_index and np.array_equal(self.primes, other.primes)

    @property
    def last_prime(self) -> int:
        return int(self.primes[-1])

    def tolist(self) -> list[int]:
        return [int(p) for p in self.primes]


def nth_prime_upper_bound(n: int) -> int:
    """An integer >= p_n; n(ln n + ln ln n) for n >= 6."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n < 6:
        return _SMALL_BOUNDS[n]
    return math.ceil(n * (math.log(n) + math.log(math.log(n))))


def _small_sieve(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.uint64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.uint64)


def iter_prime_segments(limit: int | None = None, span: int = SEGMENT_SPAN) -> Iterator[np.ndarray]:
    """Yield arrays of consecutive primes, segment by segment, up to ``limit`` (inclusive).

    With ``limit=None`` the stream is unbounded.
    """
    span += span % 2
    base = _small_sieve(max(1024, math.isqrt(span) + 1))
    base_limit = int(base[-1])

    first_hi = span if limit is None else min(span, limit + 1)
    head = _small_sieve(first_hi - 1)
    yield head
    low = first_hi + (first_hi % 2 == 0)  # odd start
    while limit is None or low <= limit:
        high = low + span if limit is None else min(low + span, limit + 1)
        need = math.isqrt(high) + 1
        if need > base_limit:
            base = _small_sieve(max(need, 2 * base_limit))
            base_limit = int(base[-1])
        n_odd = (high - low + 1) // 2
        mask = np.ones(n_odd, dtype=bool)
        for p in base[1:]:
            p = int(p)
            sq = p * p
            if sq >= high:
                break
            start = max(sq, -(-low // p) * p)
            if start % 2 == 0:
                start += p
            if start < high:
                mask[(start - low) // 2 :: p] = False
        seg = (low + 2 * np.flatnonzero(mask)).astype(np.uint64)
        if limit is not None:
            seg = seg[seg <= limit]
        yield seg
        low += 2 * n_odd


def _check_count(n: int) -> None:
    if n < 1:
        raise ValueError(f"prime count must be >= 1, got {n}")
    if n > MAX_PRIMES:
        raise ResourceLimitError(f"{n} primes requested; the limit is {MAX_PRIMES}")


def first_n_primes(n: int) -> PrimeBlock:
    _check_count(n)
    chunks = []
    have = 0
    for seg in iter_prime_segments(nth_prime_upper_bound(n)):
        chunks.append(seg)
        have += len(seg)
        if have >= n:
            break
    return PrimeBlock(1, np.concatenate(chunks)[:n])


def iter_prime_blocks(block_size: int = DEFAULT_BLOCK_SIZE, n_total: int | None = None) -> Iterator[PrimeBlock]:
    """Stream blocks of ``block_size`` primes starting at p_1; the last may be short."""
    if block_size < 1:
        raise ValueError("block_size must be >= 1")
    if n_total is not None:
        _check_count(n_total)
    limit = None if n_total is None else nth_prime_upper_bound(n_total)
    pending = np.zeros(0, dtype=np.uint64)
    index = 1
    emitted = 0
    for seg in iter_prime_segments(limit):
        pending = np.concatenate([pending, seg]) if len(pending) else seg
        if n_total is not None:
            pending = pending[: n_total - emitted]
        while len(pending) >= block_size:
            yield PrimeBlock(index, pending[:block_size])
            pending = pending[block_size:]
            index += block_size
            emitted += block_size
        if n_total is not None and emitted + len(pending) >= n_total:
            break
    if len(pending):
        yield PrimeBlock(index, pending)


def prime_blocks(n_total: int, block_size: int = DEFAULT_BLOCK_SIZE) -> list[PrimeBlock]:
    return list(iter_prime_blocks(block_size, n_total))
