"""Extremal t-intersecting families and their closed forms.

The central objects are the families

    F(n, k, t, r) = { S in binom([n], k) : |S cap B| >= t + r },

for a base set B of size t + 2r, together with the near-extremal
"tightness" families H obtained by trading one base element for a
window of d (or s) fresh elements.  Maximum sizes and biased measures
are computed by exact binomial sums.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from ._bits import binom, mask_of, popcount
from .core import SetFamily, UniformFamily, junta_generate
from .errors import InputError
from .measures import Bias, check_bias, point_weight


@dataclass(frozen=True)
class FranklSpec:
    """Parameters identifying a copy of an extremal family."""

    n: int
    t: int
    r: int
    base: tuple = ()
    k: int | None = None
    p: Bias | None = None

    def __post_init__(self):
        if self.t < 1 or self.r < 0:
            raise InputError("need t >= 1 and r >= 0")
        width = self.t + 2 * self.r
        base = tuple(self.base) if self.base else tuple(range(1, width + 1))
        object.__setattr__(self, "base", base)
        if len(base) != width:
            raise InputError(f"base must have t + 2r = {width} elements")
        if width > self.n:
            raise InputError(f"t + 2r = {width} exceeds n = {self.n}")
        if any(not 1 <= e <= self.n for e in base):
            raise InputError("base element out of range")
        if len(set(base)) != len(base):
            raise InputError("base elements must be distinct")
        if self.k is not None and not 0 <= self.k <= self.n:
            raise InputError("layer index out of range")


@dataclass(frozen=True)
class TightnessSpec:
    """Parameters of a near-extremal family: base of size t+2r plus a
    window of ``width`` fresh elements (d in the uniform setting, s in
    the biased one)."""

    n: int
    t: int
    r: int
    width: int
    k: int | None = None
    p: Bias | None = None

    def __post_init__(self):
        if self.t < 1 or self.r < 0 or self.width < 1:
            raise InputError("need t >= 1, r >= 0, width >= 1")
        if self.t + 2 * self.r + self.width > self.n:
            raise InputError("t + 2r + width exceeds n")


def frankl_family(spec: FranklSpec):
    """The family {S : |S cap base| >= t+r}, on layer k when k is given.

    Always t-intersecting: two members meet the base in >= t+r elements
    each, hence share >= 2(t+r) - (t+2r) = t of its elements.
    """
    width = spec.t + 2 * spec.r
    gens = []
    base_list = spec.base
    for size in range(spec.t + spec.r, width + 1):
        gens.extend(itertools.combinations(base_list, size))
    return junta_generate(spec.n, base_list, gens, spec.k)


def frankl_size(n: int, k: int, t: int, r: int) -> int:
    """|F(n,k,t,r)| by the exact binomial sum."""
    w = t + 2 * r
    if w > n:
        raise InputError(f"t + 2r = {w} exceeds n = {n}")
    return sum(binom(w, i) * binom(n - w, k - i) for i in range(t + r, w + 1))


def f_uniform(n: int, k: int, t: int):
    """max_r |F(n,k,t,r)| with the full list of maximizing r.

    Scans 0 <= r <= min(k - t, (n - t) // 2); the family is empty beyond.
    """
    if not 1 <= t <= k <= n:
        raise InputError("need 1 <= t <= k <= n")
    r_hi = min(k - t, (n - t) // 2)
    sizes = [frankl_size(n, k, t, r) for r in range(r_hi + 1)]
    best = max(sizes)
    return best, [r for r, s in enumerate(sizes) if s == best]


def biased_extremal_measure(p: Bias, t: int, r: int):
    """mu_p of F(n,t,r) for any n >= t+2r: the binomial tail
    sum_{i=t+r}^{t+2r} C(t+2r, i) p^i (1-p)^(t+2r-i)."""
    w = t + 2 * r
    return sum(binom(w, i) * point_weight(p, i, w) for i in range(t + r, w + 1))


def default_r_cap(p: Bias, t: int) -> int:
    """Smallest r with r/(t+2r-1) > p; beyond it the closed form only shrinks."""
    r = 1
    while Fraction(r, t + 2 * r - 1) <= p:
        r += 1
    return r


def f_biased(n: int, p: Bias, t: int, r_cap: int | None = None):
    """max_r mu_p(F(n,t,r)) over realizable r, with all maximizing r.

    Only the regime p < 1/2 is supported; the maximum does not depend on
    n except that n must accommodate the base (t + 2r <= n).
    """
    p = check_bias(p)
    if t < 1:
        raise InputError("t must be >= 1")
    if p >= Fraction(1, 2):
        raise InputError("f_biased is defined for p < 1/2 only")
    if r_cap is None:
        r_cap = default_r_cap(p, t)
    r_hi = min(r_cap, (n - t) // 2)
    values = [biased_extremal_measure(p, t, r) for r in range(r_hi + 1)]
    best = max(values)
    return best, [r for r, v in enumerate(values) if v == best]


class RStarResult(NamedTuple):
    r: int
    singular: bool | None
    tie_window: tuple | None


def r_star(beta: Bias, t: int, tol: float = 1e-12) -> RStarResult:
    """The maximizing r of the biased closed form at bias beta.

    ``singular`` is True when two consecutive r tie: exactly (rational
    beta) or within ``tol`` (float beta).  On the float path a gap in
    (tol, 10*tol] is reported as a tie window with ``singular = None``.
    """
    beta = check_bias(beta)
    if not 0 < beta < Fraction(1, 2):
        raise InputError("beta must lie in (0, 1/2)")
    r_hi = default_r_cap(beta, t)
    values = [biased_extremal_measure(beta, t, r) for r in range(r_hi + 1)]
    best = max(values)
    if isinstance(beta, Fraction):
        arg = [r for r, v in enumerate(values) if v == best]
        singular = len(arg) > 1
        return RStarResult(arg[0], singular, tuple(arg) if singular else None)
    arg = [r for r, v in enumerate(values) if v >= best - tol]
    if len(arg) > 1:
        return RStarResult(arg[0], True, tuple(arg))
    near = [r for r, v in enumerate(values) if v >= best - 10 * tol]
    if len(near) > 1:
        return RStarResult(near[0], None, tuple(near))
    return RStarResult(arg[0], False, None)


# ---------------------------------------------------------------------------
# tightness families


def _window(spec: TightnessSpec):
    w = spec.t + 2 * spec.r
    return list(range(w + 1, w + spec.width + 1))


def tightness_family(spec: TightnessSpec):
    """The two-clause near-extremal family.

    Clause 1: |A cap [t+2r]| >= t+r and A meets the window.
    Clause 2: |A cap [t+2r]| = t+r-1 and A contains the whole window.
    Uniform (layer k) when spec.k is given, power-set mode otherwise.
    """
    n, t, r, k = spec.n, spec.t, spec.r, spec.k
    w = t + 2 * r
    base = list(range(1, w + 1))
    window = _window(spec)
    outside = [e for e in range(1, n + 1) if e > w + spec.width]
    masks = []
    win_mask = mask_of(window, n)
    if k is None:
        jm = mask_of(base, n)
        rest = window + outside
        for size in range(len(rest) + 1):
            for combo_rest in itertools.combinations(rest, size):
                rm = mask_of(combo_rest, n)
                for bsize in range(t + r, w + 1):
                    for cb in itertools.combinations(base, bsize):
                        if rm & win_mask:
                            masks.append(mask_of(cb, n) | rm)
                for cb in itertools.combinations(base, t + r - 1):
                    if rm & win_mask == win_mask:
                        masks.append(mask_of(cb, n) | rm)
        return SetFamily(n, masks)
    for bsize in range(t + r, w + 1):
        for cb in itertools.combinations(base, bsize):
            bm = mask_of(cb, n)
            need = k - bsize
            for combo_rest in itertools.combinations(window + outside, need):
                rm = mask_of(combo_rest, n)
                if rm & win_mask:
                    masks.append(bm | rm)
    for cb in itertools.combinations(base, t + r - 1):
        bm = mask_of(cb, n)
        need = k - (t + r - 1) - spec.width
        if need < 0 or need > len(outside):
            continue
        for combo_rest in itertools.combinations(outside, need):
            masks.append(bm | win_mask | mask_of(combo_rest, n))
    return UniformFamily(n, k, masks)


def tightness_closed_forms(spec: TightnessSpec):
    """(mu_p(H), mu_p(H \\ F(n,t,r))) by the closed forms.

    mu_p(H) = mu_p(F(n,t,r)) (1 - (1-p)^s)
              + C(t+2r, t+r-1) p^(t+r-1) (1-p)^(r+1) p^s,
    and the excess is the second summand alone.  Exact for rational p.
    """
    if spec.p is None:
        raise InputError("tightness closed forms need a bias p")
    p = check_bias(spec.p)
    t, r, s = spec.t, spec.r, spec.width
    one = Fraction(1) if isinstance(p, Fraction) else 1.0
    q = one - p
    excess = binom(t + 2 * r, t + r - 1) * p ** (t + r - 1) * q ** (r + 1) * p**s
    mu = biased_extremal_measure(p, t, r) * (one - q**s) + excess
    return mu, excess


def tightness_uniform_size(spec: TightnessSpec) -> int:
    """|H(n,k,t,r,d)| by exact counting (uniform setting)."""
    if spec.k is None:
        raise InputError("uniform size needs a layer index k")
    n, k, t, r, d = spec.n, spec.k, spec.t, spec.r, spec.width
    w = t + 2 * r
    rest = n - w - d
    clause1 = sum(
        binom(w, i) * (binom(n - w, k - i) - binom(rest, k - i))
        for i in range(t + r, w + 1)
    )
    clause2 = binom(w, t + r - 1) * binom(rest, k - (t + r - 1) - d)
    return clause1 + clause2


# ---------------------------------------------------------------------------
# distance to the nearest extremal copy


def distance_to_frankl(fam: UniformFamily, t: int, r_max: int):
    """min |F \\ G| over copies G of F(n,k,t,r) with r <= r_max.

    A copy of F(n,k,t,r) is determined by its base set alone (the
    defining condition |S cap B| >= t+r is symmetric in B), so the scan
    ranges over base sets, not over all permutations.  Ties are broken
    toward smaller r, then the lexicographically least base.
    """
    if not isinstance(fam, UniformFamily):
        raise InputError("distance_to_frankl needs a uniform family")
    n, k = fam.n, fam.k
    if t + 2 * r_max > n:
        raise InputError(f"r_max = {r_max} too large: t + 2 r_max > n")
    best = None
    members = fam.sorted_members()
    for r in range(r_max + 1):
        w = t + 2 * r
        need = t + r
        for base in itertools.combinations(range(1, n + 1), w):
            bm = mask_of(base, n)
            inside = sum(1 for m in members if popcount(m & bm) >= need)
            loss = len(members) - inside
            key = (loss, r, base)
            if best is None or key < best:
                best = key
    loss, r, base = best
    return loss, FranklSpec(n=n, t=t, r=r, base=base, k=k)
