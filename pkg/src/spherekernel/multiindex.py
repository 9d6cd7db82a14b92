"""Shortlex combinatorics on N_0^d.

Indices are ordered first by length |a| and then lexicographically with the
larger leading entry first, so that for d = 2 the order reads

    (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), (3,0), ...

Ranks are 0-based: the zero index has rank 0.
"""

from __future__ import annotations

import math
from functools import lru_cache, total_ordering
from typing import Iterator, Sequence


@total_ordering
class MultiIndex:
    """An element of N_0^d, compared in shortlex order."""

    __slots__ = ("entries",)

    def __init__(self, entries: Sequence[int]):
        entries = tuple(int(e) for e in entries)
        if not entries:
            raise ValueError("a multi-index needs at least one entry")
        if any(e < 0 for e in entries):
            raise ValueError(f"negative entry in multi-index {entries}")
        self.entries = entries

    @classmethod
    def zero(cls, d: int) -> "MultiIndex":
        return cls((0,) * d)

    @classmethod
    def unit(cls, j: int, d: int) -> "MultiIndex":
        """e_j with j counted from 0."""
        e = [0] * d
        e[j] = 1
        return cls(e)

    @property
    def d(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __getitem__(self, j: int) -> int:
        return self.entries[j]

    @property
    def length(self) -> int:
        return sum(self.entries)

    def factorial(self) -> int:
        """a! = a_1! ... a_d!, as an exact integer."""
        out = 1
        for e in self.entries:
            out *= math.factorial(e)
        return out

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        _check_dims(self, other)
        return MultiIndex([a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "MultiIndex") -> "MultiIndex":
        _check_dims(self, other)
        return MultiIndex([a - b for a, b in zip(self.entries, other.entries)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiIndex):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __lt__(self, other: "MultiIndex") -> bool:
        return compare(self, other) < 0

    def __repr__(self) -> str:
        return f"MultiIndex({list(self.entries)})"

    def to_list(self) -> list[int]:
        return list(self.entries)


def _check_dims(a: MultiIndex, b: MultiIndex) -> None:
    if a.d != b.d:
        raise ValueError(f"dimension mismatch: {a.d} vs {b.d}")


def as_index(a) -> MultiIndex:
    return a if isinstance(a, MultiIndex) else MultiIndex(a)


def compare(a, b) -> int:
    """Return -1, 0 or 1 as a precedes, equals or follows b in shortlex order."""
    a, b = as_index(a), as_index(b)
    _check_dims(a, b)
    if a.length != b.length:
        return -1 if a.length < b.length else 1
    # within a level, a larger leading entry comes first
    for x, y in zip(a.entries, b.entries):
        if x != y:
            return -1 if x > y else 1
    return 0


def level_size(length: int, d: int) -> int:
    """Number of indices of the given length, C(length + d - 1, d - 1)."""
    if length < 0:
        return 0
    return math.comb(length + d - 1, d - 1)


def levels_before(length: int, d: int) -> int:
    """Number of indices strictly shorter than `length`, i.e. C(length - 1 + d, d)."""
    if length <= 0:
        return 0
    return math.comb(length - 1 + d, d)


def last_rank_of_level(n: int, d: int) -> int:
    """Rank of alpha(n) = n e_d, the last index of length n."""
    return math.comb(n + d, d) - 1


def level_of_rank(rank: int, d: int) -> int:
    """Length of the index sitting at `rank`."""
    n = 0
    while last_rank_of_level(n, d) < rank:
        n += 1
    return n


def _offset_in_level(entries: tuple[int, ...]) -> int:
    # count indices of the same length that precede `entries`
    offset = 0
    remaining = sum(entries)
    k = len(entries)
    for i, e in enumerate(entries[:-1]):
        slots = k - i - 1
        # any first entry larger than e comes first
        for larger in range(e + 1, remaining + 1):
            offset += level_size(remaining - larger, slots)
        remaining -= e
    return offset


def shortlex_rank(a) -> int:
    a = as_index(a)
    return levels_before(a.length, a.d) + _offset_in_level(a.entries)


def shortlex_unrank(n: int, d: int) -> MultiIndex:
    if n < 0:
        raise ValueError("rank must be nonnegative")
    if d < 1:
        raise ValueError("dimension must be at least 1")
    length = level_of_rank(n, d)
    offset = n - levels_before(length, d)
    entries = []
    remaining = length
    for i in range(d - 1):
        slots = d - i - 1
        e = remaining
        while True:
            block = level_size(remaining - e, slots)
            if offset < block:
                break
            offset -= block
            e -= 1
        entries.append(e)
        remaining -= e
    entries.append(remaining)
    return MultiIndex(entries)


def succ(a) -> MultiIndex:
    a = as_index(a)
    return shortlex_unrank(shortlex_rank(a) + 1, a.d)


def prec(a) -> MultiIndex:
    a = as_index(a)
    r = shortlex_rank(a)
    if r == 0:
        raise ValueError("the zero index has no predecessor")
    return shortlex_unrank(r - 1, a.d)


def alpha_of_level(n: int, d: int) -> MultiIndex:
    """alpha(n) = n e_d, the last index of length n."""
    return MultiIndex([0] * (d - 1) + [n])


@lru_cache(maxsize=64)
def _index_table(N: int, d: int) -> tuple[MultiIndex, ...]:
    return tuple(shortlex_unrank(k, d) for k in range(N + 1))


def indices_upto(N: int, d: int) -> tuple[MultiIndex, ...]:
    """All indices with rank 0..N, in order."""
    return _index_table(N, d)


def exponent_array(N: int, d: int):
    """(N+1, d) integer array of the exponents of ranks 0..N."""
    import numpy as np

    return np.array([a.entries for a in indices_upto(N, d)], dtype=np.int64).reshape(N + 1, d)
