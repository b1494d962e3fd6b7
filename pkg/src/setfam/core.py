"""Set families over a small ground set [n] = {1, ..., n}.

Families come in two storage modes, and the mode is part of the value:

* :class:`SetFamily` — an arbitrary family of subsets of [n] ("power-set
  mode"); operations that must enumerate all of P([n]) (up-closure,
  dual, dense indicators) require n <= N_MAX_DENSE.
* :class:`UniformFamily` — a family inside one layer binom([n], k)
  ("layer mode"), allowed up to n <= N_MAX.

Members are stored as n-bit masks (bit i-1 set iff element i present).
Families are immutable after construction and safe to share between
workers; every operation in this module is a pure function.
"""

from __future__ import annotations

import itertools
from math import comb

from . import _bits
from ._bits import elements_of, mask_of, popcount, sort_key
from .errors import ContractError, InputError, ResourceError

N_MAX = 30
N_MAX_DENSE = 24

_BITREV = bytes(int(f"{x:08b}"[::-1], 2) for x in range(256))


class SetFamily:
    """An immutable, deduplicated family of subsets of [n]."""

    __slots__ = ("n", "members", "_sorted", "_indicator")

    def __init__(self, n: int, masks=()):
        if not 1 <= n <= N_MAX:
            raise InputError(f"ground set size {n} outside 1..{N_MAX}")
        full = (1 << n) - 1
        ms = frozenset(masks)
        for m in ms:
            if m < 0 or m & ~full:
                raise InputError(f"member mask {m:#x} not a subset of [{n}]")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "members", ms)
        object.__setattr__(self, "_sorted", None)
        object.__setattr__(self, "_indicator", None)

    def __setattr__(self, name, value):
        raise AttributeError("SetFamily is immutable")

    # -- basic protocol ------------------------------------------------

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.sorted_members())

    def __contains__(self, mask: int):
        return mask in self.members

    def __eq__(self, other):
        return (
            isinstance(other, SetFamily)
            and self.n == other.n
            and self.uniformity() == other.uniformity()
            and self.members == other.members
        )

    def __hash__(self):
        return hash((self.n, self.uniformity(), self.members))

    def __repr__(self):
        kind = type(self).__name__
        return f"{kind}(n={self.n}, size={len(self.members)})"

    # -- views ----------------------------------------------------------

    def uniformity(self):
        """Layer index k for uniform families, None in power-set mode."""
        return None

    def sorted_members(self):
        """Members as masks, sorted by ascending element lists."""
        if self._sorted is None:
            object.__setattr__(self, "_sorted", tuple(sorted(self.members, key=sort_key)))
        return self._sorted

    def as_sets(self):
        """Members as ascending element tuples, in canonical order."""
        return [tuple(elements_of(m)) for m in self.sorted_members()]

    def indicator(self) -> int:
        """Dense 2^n-bit indicator; requires power-set-mode capacity."""
        self.require_dense("dense indicator")
        if self._indicator is None:
            ind = 0
            for m in self.members:
                ind |= 1 << m
            object.__setattr__(self, "_indicator", ind)
        return self._indicator

    def require_dense(self, what: str):
        if self.n > N_MAX_DENSE:
            raise ResourceError(f"{what} needs n <= {N_MAX_DENSE}, got n={self.n}")

    def popcount_histogram(self):
        """Number of members of each cardinality 0..n."""
        hist = [0] * (self.n + 1)
        for m in self.members:
            hist[popcount(m)] += 1
        return hist

    def layer(self, k: int) -> "UniformFamily":
        """The k-th layer of this family, as a uniform family."""
        return UniformFamily(self.n, k, (m for m in self.members if popcount(m) == k))

    def replace_members(self, masks):
        """Same mode and ground set, different members."""
        return SetFamily(self.n, masks)

    # -- predicates -----------------------------------------------------

    def is_increasing(self) -> bool:
        mem = self.members
        for m in mem:
            free = ~m & ((1 << self.n) - 1)
            b = free
            while b:
                low = b & -b
                if (m | low) not in mem:
                    return False
                b ^= low
        return True


class UniformFamily(SetFamily):
    """A family inside a single layer binom([n], k)."""

    __slots__ = ("k",)

    def __init__(self, n: int, k: int, masks=()):
        super().__init__(n, masks)
        if not 0 <= k <= n:
            raise InputError(f"layer index k={k} outside 0..{n}")
        for m in self.members:
            if popcount(m) != k:
                raise InputError(
                    f"member {tuple(elements_of(m))} has size {popcount(m)}, expected {k}"
                )
        object.__setattr__(self, "k", k)

    def uniformity(self):
        return self.k

    def replace_members(self, masks):
        return UniformFamily(self.n, self.k, masks)


# ---------------------------------------------------------------------------
# constructors


def make_family(n: int, sets, k: int | None = None) -> SetFamily:
    """Build a family from element lists; deduplicates, validates range.

    With ``k`` given the result is a :class:`UniformFamily` of that layer.
    """
    masks = [s if isinstance(s, int) else mask_of(s, n) for s in sets]
    if any(isinstance(s, int) and (s < 0 or s >> n) for s in sets):
        raise InputError("mask out of range")
    if k is not None:
        return UniformFamily(n, k, masks)
    return SetFamily(n, masks)


def empty_family(n: int, k: int | None = None) -> SetFamily:
    return UniformFamily(n, k, ()) if k is not None else SetFamily(n, ())


def power_set_family(n: int) -> SetFamily:
    if n > N_MAX_DENSE:
        raise ResourceError(f"power set enumeration needs n <= {N_MAX_DENSE}")
    return SetFamily(n, range(1 << n))


def full_layer(n: int, k: int) -> UniformFamily:
    return UniformFamily(n, k, _bits.all_k_masks(n, k))


def dictatorship(n: int, i: int, k: int | None = None):
    """All sets containing element i (restricted to layer k if given)."""
    return and_family(n, [i], k)


def and_family(n: int, base, k: int | None = None):
    """All sets containing the whole base set B (the |B|-umvirate)."""
    b = base if isinstance(base, int) else mask_of(base, n)
    if k is None:
        if n > N_MAX_DENSE:
            raise ResourceError(f"power-set mode needs n <= {N_MAX_DENSE}")
        rest = [i for i in range(1, n + 1) if not (b >> (i - 1)) & 1]
        masks = []
        for c in range(len(rest) + 1):
            for combo in itertools.combinations(rest, c):
                masks.append(b | mask_of(combo, n))
        return SetFamily(n, masks)
    t = popcount(b)
    if k < t:
        return UniformFamily(n, k, ())
    rest = [i for i in range(1, n + 1) if not (b >> (i - 1)) & 1]
    masks = [b | mask_of(c, n) for c in itertools.combinations(rest, k - t)]
    return UniformFamily(n, k, masks)


def or_family(n: int, base, k: int | None = None):
    """All sets meeting the base set B in at least one element."""
    b = base if isinstance(base, int) else mask_of(base, n)
    if k is None:
        if n > N_MAX_DENSE:
            raise ResourceError(f"power-set mode needs n <= {N_MAX_DENSE}")
        return SetFamily(n, (m for m in range(1 << n) if m & b))
    return UniformFamily(n, k, (m for m in _bits.all_k_masks(n, k) if m & b))


# ---------------------------------------------------------------------------
# intersection predicates


def is_t_intersecting(fam: SetFamily, t: int):
    """Whether every (ordered) pair of members meets in >= t elements.

    Returns ``(True, None)`` or ``(False, witness)`` where the witness is
    the violating pair of minimum lexicographic rank.  The diagonal pair
    (A, A) counts, so members of size < t already violate.
    """
    if t < 1:
        raise InputError("t must be a positive integer")
    mem = fam.sorted_members()
    for i, a in enumerate(mem):
        for b in mem[i:]:
            if popcount(a & b) < t:
                return False, (tuple(elements_of(a)), tuple(elements_of(b)))
    return True, None


def forbidden_intersection_witness(fam: SetFamily, t: int):
    """First pair (by lexicographic rank) with intersection exactly t-1.

    Returns None when no pair of members (including A = A) has
    intersection size t-1.
    """
    if t < 1:
        raise InputError("t must be a positive integer")
    mem = fam.sorted_members()
    for i, a in enumerate(mem):
        for b in mem[i:]:
            if popcount(a & b) == t - 1:
                return tuple(elements_of(a)), tuple(elements_of(b))
    return None


def cross_intersecting(fam: SetFamily, other: SetFamily):
    """Whether every member of one family meets every member of the other.

    Returns ``(True, None)`` or ``(False, (A, B))`` with the
    lexicographically minimal violating pair.
    """
    if fam.n != other.n:
        raise InputError("families live on different ground sets")
    for a in fam.sorted_members():
        for b in other.sorted_members():
            if not a & b:
                return False, (tuple(elements_of(a)), tuple(elements_of(b)))
    return True, None


# ---------------------------------------------------------------------------
# closure, dual


def up_closure(fam: SetFamily) -> SetFamily:
    """Minimal increasing family containing ``fam`` (power-set mode)."""
    fam.require_dense("up-closure")
    n = fam.n
    ind = fam.indicator()
    for i in range(n):
        width = 1 << i
        absent = _bits.coord_absent_indicator(n, i + 1)
        ind |= (ind & absent) << width
    return SetFamily(n, _masks_from_indicator(n, ind))


def dual(fam: SetFamily) -> SetFamily:
    """The dual family {S : [n] \\ S not in F}; an involution."""
    fam.require_dense("dual")
    n = fam.n
    total = 1 << n
    ind = fam.indicator()
    if total >= 8:
        nbytes = total // 8
        rev = int.from_bytes(
            bytes(_BITREV[x] for x in reversed(ind.to_bytes(nbytes, "little"))),
            "little",
        )
    else:
        rev = 0
        for pos in range(total):
            if (ind >> pos) & 1:
                rev |= 1 << (total - 1 - pos)
    dual_ind = ~rev & ((1 << total) - 1)
    return SetFamily(n, _masks_from_indicator(n, dual_ind))


def _masks_from_indicator(n: int, ind: int):
    masks = []
    while ind:
        low = ind & -ind
        masks.append(low.bit_length() - 1)
        ind ^= low
    return masks


def family_from_indicator(n: int, ind: int) -> SetFamily:
    """Inverse of ``SetFamily.indicator``."""
    if n > N_MAX_DENSE:
        raise ResourceError(f"dense indicator needs n <= {N_MAX_DENSE}")
    return SetFamily(n, _masks_from_indicator(n, ind))


# ---------------------------------------------------------------------------
# slices and juntas


def slice_family(fam: SetFamily, J, B):
    """The slice F_J^B = {S \\ B : S in F, S cap J = B} over [n] \\ J.

    The ground set [n] \\ J is re-indexed to 1..(n-|J|) preserving
    element order, so slices of slices compose predictably.  Uniform
    input yields a uniform slice of layer k - |B|.
    """
    n = fam.n
    jm = J if isinstance(J, int) else mask_of(J, n)
    bm = B if isinstance(B, int) else mask_of(B, n)
    if bm & ~jm:
        raise InputError("slice pointer requires B to be a subset of J")
    rest = [i for i in range(1, n + 1) if not (jm >> (i - 1)) & 1]
    new_pos = {e: idx for idx, e in enumerate(rest)}
    out = []
    for m in fam.members:
        if m & jm == bm:
            reduced = 0
            rem = m & ~jm
            while rem:
                low = rem & -rem
                reduced |= 1 << new_pos[low.bit_length()]
                rem ^= low
            out.append(reduced)
    new_n = n - popcount(jm)
    if new_n == 0:
        # degenerate ground set; keep a 1-element ground so the value is representable
        raise InputError("slice would have an empty ground set")
    if isinstance(fam, UniformFamily):
        return UniformFamily(new_n, fam.k - popcount(bm), out)
    return SetFamily(new_n, out)


def trace_counts(fam: SetFamily, J):
    """Map B -> |{S in F : S cap J = B}| for B with at least one member."""
    jm = J if isinstance(J, int) else mask_of(J, fam.n)
    counts: dict[int, int] = {}
    for m in fam.members:
        b = m & jm
        counts[b] = counts.get(b, 0) + 1
    return counts


def junta_generate(n: int, J, G, k: int | None = None):
    """The J-junta generated by G, i.e. {S : S cap J in G}.

    ``G`` is a collection of subsets of J (element lists or masks over
    the [n] coordinates).  With ``k`` the junta is restricted to the
    layer binom([n], k).
    """
    jm = J if isinstance(J, int) else mask_of(J, n)
    g_masks = set()
    for b in G:
        bm = b if isinstance(b, int) else mask_of(b, n)
        if bm & ~jm:
            raise InputError(f"generator {tuple(elements_of(bm))} is not a subset of J")
        g_masks.add(bm)
    rest = [i for i in range(1, n + 1) if not (jm >> (i - 1)) & 1]
    if k is None:
        if n > N_MAX_DENSE:
            raise ResourceError(f"power-set junta needs n <= {N_MAX_DENSE}")
        masks = []
        for bm in g_masks:
            for c in range(len(rest) + 1):
                for combo in itertools.combinations(rest, c):
                    masks.append(bm | mask_of(combo, n))
        return SetFamily(n, masks)
    masks = []
    for bm in g_masks:
        extra = k - popcount(bm)
        if extra < 0 or extra > len(rest):
            continue
        for combo in itertools.combinations(rest, extra):
            masks.append(bm | mask_of(combo, n))
    return UniformFamily(n, k, masks)


def is_junta(fam: SetFamily, J) -> bool:
    """Whether membership in ``fam`` depends only on the coordinates in J.

    Checked by slice constancy: every trace class must be empty or fill
    its whole co-layer.
    """
    jm = J if isinstance(J, int) else mask_of(J, fam.n)
    rest = fam.n - popcount(jm)
    counts = trace_counts(fam, jm)
    if isinstance(fam, UniformFamily):
        return all(cnt == comb(rest, fam.k - popcount(b)) for b, cnt in counts.items())
    return all(cnt == 1 << rest for cnt in counts.values())


def junta_trace(fam: SetFamily, J):
    """The generator G with fam = <G> on J; raises if fam is not a J-junta."""
    jm = J if isinstance(J, int) else mask_of(J, fam.n)
    if not is_junta(fam, jm):
        raise ContractError("family is not a junta on the given coordinates")
    return sorted(trace_counts(fam, jm), key=sort_key)


# ---------------------------------------------------------------------------
# permutations


def apply_permutation(fam: SetFamily, sigma):
    """Image family {sigma(S) : S in F} for a bijection sigma of [n].

    ``sigma`` maps element i to sigma[i] (a dict, or a sequence where
    position i-1 holds sigma(i)).
    """
    n = fam.n
    if isinstance(sigma, dict):
        images = [sigma.get(i) for i in range(1, n + 1)]
    else:
        images = list(sigma)
    if sorted(images) != list(range(1, n + 1)):
        raise InputError("sigma is not a bijection of [n]")
    table = [images[i] - 1 for i in range(n)]
    out = []
    for m in fam.members:
        img = 0
        rem = m
        while rem:
            low = rem & -rem
            img |= 1 << table[low.bit_length() - 1]
            rem ^= low
        out.append(img)
    return fam.replace_members(out)


# ---------------------------------------------------------------------------
# monotone (increasing) family enumeration, dense-indicator based


def enumerate_increasing_indicators(n: int):
    """Dense indicators of all increasing families over [n], ascending.

    An increasing family on [m+1] splits into a pair (F0, F1) of
    increasing families on [m] with F0 contained in F1, which gives the
    doubling recursion used here.  Counts follow the Dedekind numbers
    (2, 3, 6, 20, 168, 7581, ...).
    """
    if n > 6:
        raise ResourceError("monotone enumeration supported only for n <= 6")
    level = [0b0, 0b1]  # n = 0: empty family, family {emptyset}... see note below
    # For n = 0 the two increasing families are {} and {{}}; indicator bit 0
    # marks membership of the empty set.
    for m in range(n):
        shift = 1 << m
        nxt = []
        for hi in level:
            for lo in level:
                if lo & ~hi == 0:  # F0 (no m+1) must be contained in F1
                    nxt.append(lo | (hi << shift))
        nxt.sort()
        level = nxt
    return level


def enumerate_increasing_families(n: int):
    for ind in enumerate_increasing_indicators(n):
        yield family_from_indicator(n, ind)
