"""Enumeration and special numbers.

Set partitions of {1..n} with blocks ordered by minimum, permutations,
integer partitions, bounded compositions, binomial coefficients (standard
and the three-case modified/generalized variant), and the Chebyshev-like
sequence a_n = c*a_{n-1} - a_{n-2}.

All streams are deterministic and ordered so test snapshots are stable.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import NonIntegerResult


# ---------------------------------------------------------------------------
# Set partitions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SetPartition:
    """Partition of {1..n} into disjoint blocks ordered by their minima."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = set()
        prev_min = 0
        for block in self.blocks:
            if not block:
                raise ValueError("empty block")
            if list(block) != sorted(block):
                raise ValueError(f"block {block} not sorted")
            if block[0] <= prev_min:
                raise ValueError("blocks not ordered by minimum")
            prev_min = block[0]
            for v in block:
                if v in seen:
                    raise ValueError(f"element {v} repeated")
                seen.add(v)
        if seen != set(range(1, len(seen) + 1)):
            raise ValueError("blocks must cover {1..n} exactly")

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __str__(self) -> str:
        return "|".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks)


def enumerate_set_partitions(n: int):
    """Yield every set partition of {1..n} once, in restricted-growth-string
    lexicographic order; blocks come out canonically ordered by minimum."""
    if n < 1:
        raise ValueError("n must be >= 1")
    code = [0] * n

    def emit():
        k = max(code) + 1
        blocks = [[] for _ in range(k)]
        for i, c in enumerate(code):
            blocks[c].append(i + 1)
        return SetPartition(tuple(tuple(b) for b in blocks))

    def rec(i, mx):
        if i == n:
            yield emit()
            return
        for v in range(mx + 2):
            code[i] = v
            yield from rec(i + 1, v if v > mx else mx)

    yield from rec(1, 0)


def enumerate_permutations(items):
    """All orderings of ``items`` (one per positional permutation)."""
    return itertools.permutations(items)


# ---------------------------------------------------------------------------
# Binomial coefficients
# ---------------------------------------------------------------------------

def binom(n: int, k: int) -> int:
    """Standard binomial coefficient; 0 when k < 0 or k > n."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


@lru_cache(maxsize=None)
def mod_binom(A: int, B: int) -> int:
    """Three-case modified binomial coefficient [A; B].

    Equals the generalized binomial C(A, A-B): the product
    prod_{i=0}^{A-B-1} (A-i)/(A-B-i) when A > B, 1 when A = B, 0 when
    A < B.  Arguments may be negative.  Computed via the reflection
    C(A, k) = (-1)^k C(-A+k-1, k) for negative A; ``mod_binom_product``
    is the direct product-form reference implementation.
    """
    if A == B:
        return 1
    if A < B:
        return 0
    k = A - B
    if A >= 0:
        if B < 0:  # k > A, generalized coefficient vanishes
            return 0
        return math.comb(A, k)
    sign = -1 if k & 1 else 1
    return sign * math.comb(-A + k - 1, k)


def gbinom(x: int, y: int) -> int:
    """Generalized binomial coefficient C(x, y) for arbitrary integer x,
    nonnegative or negative y (zero when y < 0); equals [x; x-y]."""
    return mod_binom(x, x - y)


def mod_binom_product(A: int, B: int) -> int:
    """[A; B] by the defining product, numerator and denominator
    accumulated separately in big integers and divided once."""
    if A == B:
        return 1
    if A < B:
        return 0
    num = 1
    den = 1
    for i in range(A - B):
        num *= A - i
        den *= A - B - i
    if num % den:
        raise NonIntegerResult(f"[{A}; {B}] product {num}/{den} is not an integer")
    return num // den


# ---------------------------------------------------------------------------
# The a_n sequence
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def a_seq(n: int, c: int) -> int:
    """a_n with a_1 = 0, a_2 = 1, a_n = c*a_{n-1} - a_{n-2}.

    n = 0 is accepted with a_0 = -1 (the backward extension of the
    recurrence), which the closed-form cluster expressions need when the
    index n-3 reaches zero.
    """
    if c < 2:
        raise ValueError("c must be >= 2")
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return -1
    if n == 1:
        return 0
    if n == 2:
        return 1
    return c * a_seq(n - 1, c) - a_seq(n - 2, c)


class ASequence:
    """Memoized view of the sequence for a fixed c."""

    def __init__(self, c: int):
        if c < 2:
            raise ValueError("c must be >= 2")
        self.c = c
        self.values = [0, 1]  # a_1, a_2

    def at(self, n: int) -> int:
        if n < 1:
            raise ValueError("n must be >= 1")
        while len(self.values) < n:
            self.values.append(self.c * self.values[-1] - self.values[-2])
        return self.values[n - 1]


# ---------------------------------------------------------------------------
# Compositions and integer partitions
# ---------------------------------------------------------------------------

def enumerate_bounded_compositions(total: int, parts: int, bound: int):
    """All vectors (v_1..v_parts) with 0 <= v_i <= bound summing to total,
    in ascending lexicographic order."""
    if total < 0:
        return
    if parts == 0:
        if total == 0:
            yield ()
        return
    cur = [0] * parts

    def rec(i, remaining):
        if i == parts - 1:
            if 0 <= remaining <= bound:
                cur[i] = remaining
                yield tuple(cur)
            return
        lo = max(0, remaining - bound * (parts - i - 1))
        hi = min(bound, remaining)
        for v in range(lo, hi + 1):
            cur[i] = v
            yield from rec(i + 1, remaining - v)

    yield from rec(0, total)


def enumerate_positive_compositions(total: int, parts: int):
    """All vectors of ``parts`` positive integers summing to total."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if total < parts:
        return
    for comp in enumerate_bounded_compositions(total - parts, parts, total - parts):
        yield tuple(v + 1 for v in comp)


@dataclass(frozen=True)
class IntPartition:
    """Weakly decreasing tuple of positive integers."""

    parts: tuple[int, ...]

    def __post_init__(self):
        for i, p in enumerate(self.parts):
            if p < 1:
                raise ValueError("parts must be positive")
            if i and self.parts[i - 1] < p:
                raise ValueError("parts must be weakly decreasing")

    def length(self) -> int:
        return len(self.parts)

    def size(self) -> int:
        return sum(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def partitions_of(d: int, max_part: int | None = None, max_length: int | None = None):
    """Partitions of exactly d, largest-first lexicographic order."""
    if max_part is None:
        max_part = d
    if max_length is None:
        max_length = d
    prefix: list[int] = []

    def rec(remaining, cap, slots):
        if remaining == 0:
            yield tuple(prefix)
            return
        if slots == 0:
            return
        for p in range(min(remaining, cap), 0, -1):
            prefix.append(p)
            yield from rec(remaining - p, p, slots - 1)
            prefix.pop()

    yield from rec(d, max_part, max_length)


def enumerate_int_partitions(max_size: int, max_length: int):
    """All partitions with size <= max_size and length <= max_length,
    including the empty partition, ordered by size then largest-first."""
    yield IntPartition(())
    for d in range(1, max_size + 1):
        for parts in partitions_of(d, max_length=max_length):
            yield IntPartition(parts)
