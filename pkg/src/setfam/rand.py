"""Seeded random generators for families used in audits and tests.

All generators take a ``random.Random`` instance (or a seed) so that
every randomized experiment in the package is bit-reproducible.
"""

from __future__ import annotations

import random

from ._bits import all_k_masks, popcount
from .core import SetFamily, UniformFamily, and_family, up_closure
from .errors import InputError


def _rng(seed_or_rng) -> random.Random:
    if isinstance(seed_or_rng, random.Random):
        return seed_or_rng
    return random.Random(seed_or_rng)


def random_uniform_family(n: int, k: int, size: int, seed) -> UniformFamily:
    rng = _rng(seed)
    pool = list(all_k_masks(n, k))
    if size > len(pool):
        raise InputError(f"requested {size} members from a layer of {len(pool)}")
    return UniformFamily(n, k, rng.sample(pool, size))


def random_dense_uniform_family(n: int, k: int, density: float, seed) -> UniformFamily:
    """Each k-set kept independently with the given probability."""
    rng = _rng(seed)
    return UniformFamily(n, k, (m for m in all_k_masks(n, k) if rng.random() < density))


def random_increasing_family(n: int, seed, generators: int | None = None) -> SetFamily:
    """Up-closure of a few random generator sets."""
    rng = _rng(seed)
    g = rng.randint(1, n) if generators is None else generators
    gens = [rng.getrandbits(n) for _ in range(g)]
    return up_closure(SetFamily(n, gens))


def random_increasing_t_intersecting(n: int, t: int, seed, adds: int = 8) -> SetFamily:
    """A random increasing t-intersecting family.

    Starts from a random t-umvirate and repeatedly adds the up-closure
    of a random set when doing so keeps the family t-intersecting: a new
    set S with |S| >= t may be added whenever |S cap A| >= t for every
    current member A, because supersets of S then satisfy the same
    bound, and two supersets of S share at least |S| elements.
    """
    rng = _rng(seed)
    if not 1 <= t <= n:
        raise InputError("need 1 <= t <= n")
    base = rng.sample(range(1, n + 1), t)
    fam = and_family(n, base)
    members = set(fam.members)
    for _ in range(adds):
        s = rng.getrandbits(n)
        if popcount(s) < t or s in members:
            continue
        if all(popcount(s & a) >= t for a in members):
            members.add(s)
            fam = up_closure(SetFamily(n, members))
            members = set(fam.members)
    return fam
