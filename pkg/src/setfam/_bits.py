"""Bitmask utilities for subsets of [n] = {1, ..., n}.

A subset S of [n] is encoded as an n-bit integer whose bit (i-1) is set
iff i is in S.  A *dense indicator* encodes a whole family over P([n])
as a single 2^n-bit integer whose bit at position m is set iff the
subset with mask m belongs to the family; this makes up-closure, duals
and per-layer counting cheap big-integer operations.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb


def mask_of(elements, n: int) -> int:
    m = 0
    for e in elements:
        if not 1 <= e <= n:
            raise ValueError(f"element {e} out of range 1..{n}")
        m |= 1 << (e - 1)
    return m


def elements_of(mask: int):
    """Ascending list of elements of the subset encoded by ``mask``."""
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def popcount(mask: int) -> int:
    return mask.bit_count()


def all_k_masks(n: int, k: int):
    """All k-subset masks of [n] in lexicographic order of ascending lists."""
    for combo in itertools.combinations(range(n), k):
        yield sum(1 << c for c in combo)


def sort_key(mask: int):
    """Canonical order on subsets: ascending element lists compared left to right."""
    return tuple(elements_of(mask))


@lru_cache(maxsize=None)
def layer_indicator(n: int, c: int) -> int:
    """Dense indicator (2^n bits) of all masks of popcount c.

    Built by doubling on n, so each value costs O(2^n / wordsize)
    big-int work given its predecessors.
    """
    if c < 0 or c > n:
        return 0
    if n == 0:
        return 1 if c == 0 else 0
    lo = layer_indicator(n - 1, c)
    hi = layer_indicator(n - 1, c - 1)
    return lo | (hi << (1 << (n - 1)))


@lru_cache(maxsize=None)
def coord_absent_indicator(n: int, i: int) -> int:
    """Dense indicator of masks m (over [n]) with bit (i-1) clear."""
    width = 1 << (i - 1)
    ind = (1 << width) - 1  # one block of masks with bit i-1 clear
    span = width << 1
    total = 1 << n
    while span < total:
        ind |= ind << span
        span <<= 1
    return ind


def popcount_histogram(n: int, indicator: int):
    """Number of member masks of each cardinality, from a dense indicator."""
    return [(indicator & layer_indicator(n, c)).bit_count() for c in range(n + 1)]


def binom(n: int, k: int) -> int:
    if k < 0 or k > n or n < 0:
        return 0
    return comb(n, k)
