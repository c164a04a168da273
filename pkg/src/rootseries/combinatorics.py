"""Multisets, set partitions, compositions and Stirling numbers."""

from __future__ import annotations

import math
from itertools import combinations
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from .scalars import UniPoly, as_fraction, falling_factorial

DEFAULT_NMAX = 32


class MultiIndex(tuple):
    """A d-tuple (n_1, ..., n_d) of non-negative integers."""

    def __new__(cls, entries):
        entries = tuple(int(n) for n in entries)
        if not entries:
            raise ValueError("multi-index needs d >= 1")
        if any(n < 0 for n in entries):
            raise ValueError(f"multi-index entries must be >= 0: {entries}")
        return super().__new__(cls, entries)

    @property
    def order(self) -> int:
        return sum(self)

    @property
    def d(self) -> int:
        return len(self)

    def to_multiset(self) -> "OrderedMultiset":
        """The sorted ordered multiset with these multiplicities."""
        return OrderedMultiset(i + 1 for i, n in enumerate(self) for _ in range(n))

    def __repr__(self):
        return f"MultiIndex{tuple(self)}"


class OrderedMultiset(tuple):
    """An N-tuple (I(1), ..., I(N)) of labels in [1, d], N >= 1."""

    def __new__(cls, entries):
        entries = tuple(int(i) for i in entries)
        if not entries:
            raise ValueError("ordered multisets are non-empty")
        if any(i < 1 for i in entries):
            raise ValueError(f"multiset labels start at 1: {entries}")
        return super().__new__(cls, entries)

    def multiplicity(self, label: int) -> int:
        return self.count(label)

    def multi_index(self, d: int) -> MultiIndex:
        if max(self) > d:
            raise ValueError(f"label {max(self)} exceeds d={d}")
        return MultiIndex(self.count(i) for i in range(1, d + 1))

    def __repr__(self):
        return f"OrderedMultiset{tuple(self)}"


def multi_indices(d: int, order: int) -> Iterator[MultiIndex]:
    """All d-tuples of non-negative integers summing to ``order``, lexicographically descending."""
    if d == 1:
        yield MultiIndex((order,))
        return
    for first in range(order, -1, -1):
        for rest in multi_indices(d - 1, order - first):
            yield MultiIndex((first,) + tuple(rest))


def _restricted_growth(N: int, k: int) -> Iterator[list]:
    # a[0] = 0; a[i] <= 1 + max(a[:i]); exactly k distinct values
    a = [0] * N

    def rec(i: int, used: int):
        if N - i < k - used:
            return
        if i == N:
            if used == k:
                yield list(a)
            return
        for v in range(min(used + 1, k)):
            a[i] = v
            yield from rec(i + 1, max(used, v + 1))

    yield from rec(1, 1) if N >= 1 else iter(())


@lru_cache(maxsize=None)
def set_partitions(N: int, k: int) -> tuple:
    """Set partitions of [1, N] into k blocks.

    Each partition is a k-tuple of increasing tuples, ordered by block minimum.
    Returns an empty tuple when k > N or k < 1.
    """
    if N < 1 or k < 1 or k > N:
        return ()
    out = []
    for rgs in _restricted_growth(N, k):
        blocks = [[] for _ in range(k)]
        for pos, b in enumerate(rgs, start=1):
            blocks[b].append(pos)
        out.append(tuple(tuple(b) for b in blocks))
    return tuple(out)


def set_partitions_of(elements: Sequence[int], k: int) -> list:
    """Set partitions of an arbitrary finite set of integers into k blocks."""
    elems = sorted(elements)
    return [
        tuple(tuple(elems[i - 1] for i in block) for block in s)
        for s in set_partitions(len(elems), k)
    ]


def multiset_partitions(I: Sequence[int], k: int) -> list:
    """Image of ``set_partitions(|I|, k)`` under J_i = (I(s_i(1)), ...)."""
    I = OrderedMultiset(I)
    return [
        tuple(OrderedMultiset(I[pos - 1] for pos in block) for block in s)
        for s in set_partitions(len(I), k)
    ]


def remove_index(I: Sequence[int], h: int) -> OrderedMultiset:
    """I with the entry at 1-based position h removed."""
    I = OrderedMultiset(I)
    if len(I) < 2:
        raise ValueError("removing the only element would leave an empty multiset")
    if not 1 <= h <= len(I):
        raise IndexError(f"h={h} outside [1, {len(I)}]")
    return OrderedMultiset(I[: h - 1] + I[h:])


def compositions(n: int, k: int) -> Iterator[tuple]:
    """Weak compositions of n into k non-negative parts."""
    if k == 0:
        if n == 0:
            yield ()
        return
    if k == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in compositions(n - first, k - 1):
            yield (first,) + rest


def increasing_tuples(upper: int, k: int) -> Iterator[tuple]:
    """Strictly increasing k-tuples from [1, upper]; the empty tuple when k = 0."""
    return combinations(range(1, upper + 1), k)


def subsets(M: int) -> Iterator[tuple]:
    """All subsets of [1, M] as sorted tuples (2^M of them)."""
    for mask in range(1 << M):
        yield tuple(i + 1 for i in range(M) if mask >> i & 1)


class StirlingTables:
    """Unsigned first-kind and second-kind Stirling numbers for 0 <= N <= nmax."""

    def __init__(self, nmax: int = DEFAULT_NMAX):
        self.nmax = nmax
        first = [[0] * (nmax + 2) for _ in range(nmax + 2)]
        second = [[0] * (nmax + 2) for _ in range(nmax + 2)]
        first[0][0] = second[0][0] = 1
        for N in range(nmax + 1):
            for r in range(N + 1):
                first[N + 1][r + 1] = first[N][r] + N * first[N][r + 1]
                second[N + 1][r + 1] = second[N][r] + (r + 1) * second[N][r + 1]
        self._first = first
        self._second = second

    def first(self, N: int, r: int) -> int:
        if N < 0 or r < 0 or r > N:
            return 0
        self._check(N)
        return self._first[N][r]

    def second(self, N: int, r: int) -> int:
        if N < 0 or r < 0 or r > N:
            return 0
        self._check(N)
        return self._second[N][r]

    def _check(self, N):
        if N > self.nmax:
            raise ValueError(f"N={N} exceeds table size {self.nmax}")


@lru_cache(maxsize=8)
def stirling_tables(nmax: int = DEFAULT_NMAX) -> StirlingTables:
    return StirlingTables(nmax)


def _tables_for(N: int) -> StirlingTables:
    return stirling_tables(max(DEFAULT_NMAX, N))


def stirling1(N: int, r: int) -> int:
    """Unsigned Stirling number of the first kind [N r]."""
    return _tables_for(N).first(N, r)


def stirling2(N: int, r: int) -> int:
    """Stirling number of the second kind {N r}."""
    return _tables_for(N).second(N, r)


@lru_cache(maxsize=None)
def _shifted_rows(N: int) -> tuple:
    # rows[r] = coefficient of Y^r in prod_{i=1}^N (Y + X - i), as a polynomial in X
    rows = [UniPoly.constant(1)]
    for i in range(1, N + 1):
        lin = UniPoly([-i, 1])
        new = [UniPoly()] * (len(rows) + 1)
        for r, p in enumerate(rows):
            new[r + 1] = new[r + 1] + p
            new[r] = new[r] + lin * p
        rows = new
    return tuple(rows)


def stirling_shifted(N: int, r: int) -> UniPoly:
    """Coefficient of Y^r in (Y + X - 1)_N as a polynomial in X; zero for N < 0."""
    if r < 0:
        raise ValueError("r must be non-negative")
    if N < 0 or r > N:
        return UniPoly()
    return _shifted_rows(N)[r]


def stirling_shifted_at(N: int, r: int, x) -> Fraction:
    """Shifted Stirling number evaluated at X = x, without building the polynomial."""
    if N < 0 or r < 0 or r > N:
        return Fraction(0)
    x = as_fraction(x)
    # e_{N-r}(x-1, ..., x-N)
    e = [Fraction(1)] + [Fraction(0)] * (N - r)
    for i in range(1, N + 1):
        c = x - i
        for m in range(min(i, N - r), 0, -1):
            e[m] += c * e[m - 1]
    return e[N - r]


def newton_reconstruct(samples: Sequence, x):
    """Evaluate the degree <= m polynomial with F(1..m+1) = samples at x via forward differences."""
    F = [as_fraction(s) if not isinstance(s, complex) else s for s in samples]
    x = as_fraction(x) if not isinstance(x, complex) else x
    total = Fraction(0)
    for k in range(1, len(F) + 1):
        diff = sum(
            (-1) ** (k - 1 - r) * math.comb(k - 1, r) * F[r] for r in range(k)
        )
        total += falling_factorial(x - 1, k - 1) / math.factorial(k - 1) * diff
    return total
