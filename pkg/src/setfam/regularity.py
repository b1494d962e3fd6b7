"""Entropy-potential machinery and the weak regularity decomposition.

The potential of a uniform family F relative to a coordinate set J is
the expectation, under the hypergeometric trace distribution, of
alpha log alpha where alpha is the density of the slice of F at each
trace; it lives in [-1/e, 0], vanishes exactly on J-juntas, and is
monotone under J-inclusion.  The decomposition grows J until the good
(dense, potentially stable) slices capture all but an epsilon of F.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._bits import binom, elements_of, mask_of, popcount, sort_key
from .core import SetFamily, UniformFamily, junta_generate
from .errors import ContractError, InputError, ResourceError
from .report import format_value

_E = math.e


def _xlogx(x: float) -> float:
    return 0.0 if x <= 0.0 else x * math.log(x)


# ---------------------------------------------------------------------------
# the trace distribution


@dataclass(frozen=True)
class SliceDistribution:
    """Exact distribution of A cap J for a uniform random k-set A."""

    n: int
    k: int
    J: tuple
    table: dict

    def prob(self, B) -> Fraction:
        bm = B if isinstance(B, int) else mask_of(B, self.n)
        return self.table.get(bm, Fraction(0))

    def items(self):
        return sorted(self.table.items(), key=lambda kv: sort_key(kv[0]))


def slice_distribution(n: int, k: int, J) -> SliceDistribution:
    """P[A cap J = B] = C(n-|J|, k-|B|) / C(n, k) for every B in P(J)."""
    if not 0 <= k <= n:
        raise InputError("need 0 <= k <= n")
    coords = _coords(J, n)
    jm = mask_of(coords, n)
    total = binom(n, k)
    table = {}
    for size in range(len(coords) + 1):
        for combo in itertools.combinations(coords, size):
            bm = mask_of(combo, n)
            table[bm] = Fraction(binom(n - len(coords), k - size), total)
    return SliceDistribution(n=n, k=k, J=tuple(coords), table=table)


def _coords(J, n: int):
    if isinstance(J, int):
        return tuple(elements_of(J))
    coords = tuple(sorted(J))
    for c in coords:
        if not 1 <= c <= n:
            raise InputError(f"coordinate {c} out of range 1..{n}")
    if len(set(coords)) != len(coords):
        raise InputError("duplicate coordinates in J")
    return coords


# ---------------------------------------------------------------------------
# slice views: a family over a subset of the original coordinates


class _SliceView:
    """Members (as masks over original labels) of one slice, plus its
    ground coordinates and layer."""

    __slots__ = ("masks", "coords", "kappa")

    def __init__(self, masks: np.ndarray, coords: tuple, kappa: int):
        self.masks = masks
        self.coords = coords
        self.kappa = kappa

    @property
    def m(self):
        return len(self.coords)

    def density(self) -> Fraction:
        return Fraction(len(self.masks), binom(self.m, self.kappa))

    def trace_index(self, sub: tuple) -> np.ndarray:
        idx = np.zeros(len(self.masks), dtype=np.int64)
        for pos, c in enumerate(sub):
            idx |= ((self.masks >> (c - 1)) & 1) << pos
        return idx

    def trace_counts(self, sub: tuple) -> np.ndarray:
        if len(self.masks) == 0:
            return np.zeros(1 << len(sub), dtype=np.int64)
        return np.bincount(self.trace_index(sub), minlength=1 << len(sub))

    def phi(self, sub: tuple) -> float:
        """Expected alpha log alpha over the trace distribution on ``sub``."""
        m, kappa, j = self.m, self.kappa, len(sub)
        total = binom(m, kappa)
        counts = self.trace_counts(sub)
        terms = []
        for b in range(1 << j):
            denom = binom(m - j, kappa - int(bin(b).count("1")))
            if denom == 0:
                continue
            prob = denom / total
            alpha = counts[b] / denom
            terms.append(prob * _xlogx(alpha))
        return math.fsum(terms)

    def phi_empty(self) -> float:
        return _xlogx(len(self.masks) / binom(self.m, self.kappa))

    def stability_witness(self, eta: float, h: int):
        """First coordinate set (size-then-lex) raising phi by >= eta, or None."""
        base = self.phi_empty()
        for size in range(1, min(h, self.m) + 1):
            for sub in itertools.combinations(self.coords, size):
                if self.phi(sub) >= base + eta:
                    return sub
        return None

    def quasirandom_deviation(self, h: int):
        """(max |alpha - mu|, first (J,B) exceeding it is tracked by caller)."""
        mu = len(self.masks) / binom(self.m, self.kappa)
        worst = 0.0
        worst_at = None
        for size in range(1, min(h, self.m) + 1):
            for sub in itertools.combinations(self.coords, size):
                counts = self.trace_counts(sub)
                for b in range(1 << size):
                    denom = binom(self.m - size, self.kappa - int(bin(b).count("1")))
                    if denom == 0:
                        continue
                    dev = abs(counts[b] / denom - mu)
                    if dev > worst:
                        worst = dev
                        worst_at = (sub, b)
        return worst, worst_at


def _full_view(fam: UniformFamily) -> _SliceView:
    masks = np.fromiter(fam.members, dtype=np.int64, count=len(fam))
    return _SliceView(masks, tuple(range(1, fam.n + 1)), fam.k)


# ---------------------------------------------------------------------------
# public potential operations


def potential(fam: UniformFamily, J) -> float:
    """phi(F, J): in [-1/e, 0]; zero iff F is a J-junta; monotone in J."""
    if not isinstance(fam, UniformFamily):
        raise InputError("potential needs a uniform family")
    coords = _coords(J, fam.n)
    return _full_view(fam).phi(coords)


def potential_terms(fam: UniformFamily, J):
    """Exact per-trace pairs (B mask, probability, slice density)."""
    coords = _coords(J, fam.n)
    n, k = fam.n, fam.k
    total = binom(n, k)
    counts: dict[int, int] = {}
    jm = mask_of(coords, n)
    for m in fam.members:
        counts[m & jm] = counts.get(m & jm, 0) + 1
    out = []
    for size in range(len(coords) + 1):
        for combo in itertools.combinations(coords, size):
            bm = mask_of(combo, n)
            denom = binom(n - len(coords), k - size)
            if denom == 0:
                continue
            out.append((bm, Fraction(denom, total), Fraction(counts.get(bm, 0), denom)))
    return out


def potential_is_zero(fam: UniformFamily, J) -> bool:
    """Exact test: phi vanishes iff every slice density is 0 or 1."""
    return all(alpha in (0, 1) for _, _, alpha in potential_terms(fam, J))


def _scan_budget(n: int, h: int, budget: int):
    count = sum(binom(n, j) for j in range(1, h + 1))
    if count > budget:
        raise ResourceError(
            f"scanning {count} coordinate sets exceeds the budget of {budget}"
        )


def is_potentially_stable(fam: UniformFamily, eta, h: int, budget: int = 2_000_000):
    """Whether phi(F, J) < phi(F, 0) + eta for every |J| <= h.

    Returns ``(True, None)`` or ``(False, witness_J)`` with the first
    witness in size-then-lex order.
    """
    if h > fam.n:
        h = fam.n
    _scan_budget(fam.n, h, budget)
    witness = _full_view(fam).stability_witness(float(eta), h)
    return (witness is None), witness


def is_slice_quasirandom(fam: UniformFamily, delta, h: int, budget: int = 2_000_000):
    """Whether every slice over at most h coordinates has density within
    delta of mu(F).  Returns ``(True, None)`` or ``(False, (J, B))``."""
    if h > fam.n:
        h = fam.n
    _scan_budget(fam.n, h, budget)
    view = _full_view(fam)
    mu = len(fam) / binom(fam.n, fam.k)
    for size in range(1, h + 1):
        for sub in itertools.combinations(view.coords, size):
            counts = view.trace_counts(sub)
            for b in range(1 << size):
                denom = binom(view.m - size, view.kappa - int(bin(b).count("1")))
                if denom == 0:
                    continue
                if abs(counts[b] / denom - mu) >= float(delta):
                    bmask = mask_of([sub[j] for j in range(size) if (b >> j) & 1], fam.n)
                    return False, (sub, bmask)
    return True, None


def eta_for(lam, delta, C=1):
    """Stability threshold min(lam d^2 / 2C, lam^3 d^2 / (2 (1-lam)^2 C))."""
    if not 0 < lam < 1 or not 0 < delta < 1 or not C > 0:
        raise InputError("need lam, delta in (0,1) and C > 0")
    first = lam * delta * delta / (2 * C)
    second = lam**3 * delta * delta / (2 * (1 - lam) * (1 - lam) * C)
    return min(first, second)


def fox_gap_check(probs, values, beta):
    """Both sides of the Jensen-gap bound for f(x) = x log x.

    Returns ``(lhs, rhs)`` with lhs = E f(X) and
    rhs = f(EX) + (1 - beta + f(beta)) P[X <= beta EX] EX.
    """
    if len(probs) != len(values):
        raise InputError("probs and values must have equal length")
    if not 0 < beta < 1:
        raise InputError("beta must lie in (0,1)")
    pf = [float(p) for p in probs]
    xf = [float(x) for x in values]
    if any(p < 0 for p in pf) or abs(math.fsum(pf) - 1.0) > 1e-9:
        raise InputError("probs must be a probability vector")
    if any(x < 0 for x in xf):
        raise InputError("values must be nonnegative")
    ex = math.fsum(p * x for p, x in zip(pf, xf))
    lhs = math.fsum(p * _xlogx(x) for p, x in zip(pf, xf))
    tail = math.fsum(p for p, x in zip(pf, xf) if x <= beta * ex)
    rhs = _xlogx(ex) + (1 - beta + _xlogx(beta)) * tail * ex
    return lhs, rhs


# ---------------------------------------------------------------------------
# paired-random families and the forbidden-intersection witness


def gen_paired_random(n: int, seed) -> UniformFamily:
    """One member from each complementary pair {S, [n]\\S} of (n/2)-sets.

    Density is exactly 1/2 and no two members are disjoint (disjoint
    half-sets are complementary).  Deterministic for a fixed seed.
    """
    if n % 2:
        raise InputError("paired-random families need even n")
    import random as _random

    rng = _random.Random(seed)
    k = n // 2
    full = (1 << n) - 1
    masks = []
    for combo in itertools.combinations(range(2, n + 1), k - 1):
        m = 1 | mask_of(combo, n)  # the representative containing element 1
        masks.append(m if rng.random() < 0.5 else full ^ m)
    return UniformFamily(n, k, masks)


def intersection_witness(famA: UniformFamily, famB: UniformFamily, t: int):
    """Lexicographically minimal pair (A, B) with |A cap B| = t - 1, or None."""
    if famA.n != famB.n:
        raise InputError("families live on different ground sets")
    if t < 1:
        raise InputError("t must be positive")
    k1, k2, n = famA.k, famB.k, famA.n
    target = t - 1
    if target > min(k1, k2) or target < k1 + k2 - n:
        return None
    b_members = famB.sorted_members()
    for a in famA.sorted_members():
        for b in b_members:
            if popcount(a & b) == target:
                return tuple(elements_of(a)), tuple(elements_of(b))
    return None


# ---------------------------------------------------------------------------
# the decomposition


@dataclass(frozen=True)
class SliceDiagnostic:
    label: str  # good | bad | exceptional
    density: Fraction
    margin: float | None = None  # delta minus worst deviation, good slices only
    witness: tuple | None = None  # potential-stability witness, bad slices only


@dataclass(frozen=True)
class IterationRecord:
    J: tuple
    phi: float
    leftover: Fraction
    n_good: int
    n_bad: int
    n_exceptional: int


@dataclass
class DecompositionResult:
    n: int
    k: int
    J: tuple
    good: tuple  # masks of the good trace sets
    diagnostics: dict
    log: list
    params: dict
    leftover: Fraction

    def junta(self) -> UniformFamily:
        return junta_generate(self.n, self.J, self.good, self.k)

    def render_report(self) -> str:
        lines = [
            f"J = {list(self.J)}",
            f"leftover = {format_value(self.leftover)}",
        ]
        for bm, diag in sorted(self.diagnostics.items(), key=lambda kv: sort_key(kv[0])):
            parts = [
                f"B={list(elements_of(bm))}",
                diag.label,
                f"density={format_value(diag.density)}",
            ]
            if diag.margin is not None:
                parts.append(f"margin={diag.margin:.17g}")
            if diag.witness is not None:
                parts.append(f"witness={list(diag.witness)}")
            lines.append(" ".join(parts))
        for rec in self.log:
            lines.append(
                f"iteration J={list(rec.J)} phi={rec.phi:.17g} "
                f"leftover={format_value(rec.leftover)} good={rec.n_good} "
                f"bad={rec.n_bad} exceptional={rec.n_exceptional}"
            )
        return "\n".join(lines) + "\n"

    def summary(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "J": list(self.J),
            "good": [list(elements_of(b)) for b in sorted(self.good, key=sort_key)],
            "leftover": str(self.leftover),
            "iterations": len(self.log),
            "params": {key: float(val) for key, val in self.params.items()},
        }


def regularity_decompose(
    fam: UniformFamily,
    zeta,
    delta,
    h: int,
    eps,
    eta=None,
    max_iterations: int | None = None,
) -> DecompositionResult:
    """Grow J until the good slices of F capture all but eps of its mass.

    Per round, every trace set B over J with positive probability is
    classified: exceptional when its slice density is <= eps/2, good
    when dense and (eta,h)-potentially stable, bad otherwise.  If
    mu(F \\ <good>) < eps the round's junta is returned; otherwise each
    bad slice contributes a potential-stability witness of at most h
    coordinates, all of which join J.  Each such round raises phi(F, J)
    by at least eta*eps/2, which bounds the number of rounds.
    """
    if not isinstance(fam, UniformFamily):
        raise InputError("decomposition needs a uniform family")
    n, k = fam.n, fam.k
    zf = float(zeta)
    if not (zf * n < k < (1 - zf) * n):
        raise ContractError(f"need zeta*n < k < (1-zeta)*n, got k={k}, n={n}, zeta={zf}")
    if eta is None:
        eta = eta_for((zf / 2) ** h, float(delta), 1)
    eta = float(eta)
    epsf = float(eps)
    cap = min(int(math.ceil(2 / (_E * eta * epsf))) + 1, n + 2)
    if max_iterations is not None:
        cap = min(cap, max_iterations)

    masks = np.fromiter(fam.members, dtype=np.int64, count=len(fam))
    total = binom(n, k)
    eps_frac = Fraction(eps)
    J: tuple = ()
    log: list[IterationRecord] = []

    for _ in range(cap):
        full_view = _SliceView(masks, tuple(range(1, n + 1)), k)
        rest = tuple(c for c in range(1, n + 1) if c not in J)
        diagnostics: dict[int, SliceDiagnostic] = {}
        good_masses = 0
        good_slices: list[tuple[int, _SliceView]] = []
        bad_witnesses: list[tuple] = []
        if len(masks):
            idx = full_view.trace_index(J) if J else np.zeros(len(masks), dtype=np.int64)
            order = np.argsort(idx, kind="stable")
            sorted_masks = masks[order]
            uniq, starts, cnts = np.unique(idx[order], return_index=True, return_counts=True)
            count_of = dict(zip(uniq.tolist(), cnts.tolist()))
            start_of = dict(zip(uniq.tolist(), starts.tolist()))
        else:
            sorted_masks = masks
            count_of, start_of = {}, {}
        if len(J) <= 12:
            trace_values = range(1 << len(J))  # full diagnostics for small J
        else:
            trace_values = sorted(count_of)
        for b in trace_values:
            bsize = bin(b).count("1")
            denom = binom(n - len(J), k - bsize)
            if denom == 0:
                continue  # zero-probability trace, excluded from classification
            cnt = count_of.get(b, 0)
            density = Fraction(cnt, denom)
            bmask = mask_of([J[j] for j in range(len(J)) if (b >> j) & 1], n)
            if density <= eps_frac / 2:
                diagnostics[bmask] = SliceDiagnostic("exceptional", density)
                continue
            start = start_of[b]
            view = _SliceView(sorted_masks[start : start + cnt], rest, k - bsize)
            witness = view.stability_witness(eta, h)
            if witness is None:
                diagnostics[bmask] = SliceDiagnostic("good", density)
                good_masses += cnt
                good_slices.append((bmask, view))
            else:
                diagnostics[bmask] = SliceDiagnostic("bad", density, witness=witness)
                bad_witnesses.append(witness)
        leftover = Fraction(len(fam) - good_masses, total)
        phi_now = full_view.phi(J)
        log.append(
            IterationRecord(
                J=J,
                phi=phi_now,
                leftover=leftover,
                n_good=len(good_slices),
                n_bad=len(bad_witnesses),
                n_exceptional=sum(
                    1 for d in diagnostics.values() if d.label == "exceptional"
                ),
            )
        )
        if leftover < eps_frac:
            for bmask, view in good_slices:
                dev, _ = view.quasirandom_deviation(h)
                diag = diagnostics[bmask]
                diagnostics[bmask] = SliceDiagnostic(
                    "good", diag.density, margin=float(delta) - dev
                )
            return DecompositionResult(
                n=n,
                k=k,
                J=J,
                good=tuple(sorted((b for b, _ in good_slices), key=sort_key)),
                diagnostics=diagnostics,
                log=log,
                params={"zeta": zf, "delta": float(delta), "h": h, "eps": epsf, "eta": eta},
                leftover=leftover,
            )
        grown = set(J)
        for witness in bad_witnesses:
            grown.update(witness)
        if len(grown) - len(J) > h * (1 << len(J)):
            raise ContractError("witness growth exceeded its h * 2^|J| bound")
        J = tuple(sorted(grown))
    err = ResourceError(
        f"decomposition did not converge within {cap} iterations "
        "(parameter budget infeasible at this n)"
    )
    err.phi_log = log
    raise err
