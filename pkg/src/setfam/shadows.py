"""Lower shadows, lexicographic segments, and cross-intersecting bounds.

The lexicographic order on k-subsets compares ascending element lists
left to right, so {1,2} < {1,3} < ... < {2,3} < ...; initial segments
of this order minimize the shadow (Kruskal-Katona), which the audits
here check directly rather than assume.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import log

from ._bits import binom, mask_of, popcount
from .core import SetFamily, UniformFamily, cross_intersecting
from .errors import ContractError, InputError
from .measures import Bias, check_bias, mu_biased
from .report import AuditReport


def lower_shadow(fam: UniformFamily) -> UniformFamily:
    """All (k-1)-sets contained in some member."""
    if not isinstance(fam, UniformFamily):
        raise InputError("lower_shadow needs a uniform family")
    if fam.k < 1:
        raise InputError("shadow of the bottom layer is undefined")
    out = set()
    for m in fam.members:
        rem = m
        while rem:
            low = rem & -rem
            out.add(m ^ low)
            rem ^= low
    return UniformFamily(fam.n, fam.k - 1, out)


def iterated_shadow(fam: UniformFamily, steps: int) -> UniformFamily:
    if steps < 0 or steps > fam.k:
        raise InputError(f"cannot take {steps} shadow steps from layer {fam.k}")
    cur = fam
    for _ in range(steps):
        cur = lower_shadow(cur)
    return cur


def lex_segment(n: int, k: int, m: int) -> UniformFamily:
    """The first m k-subsets of [n] in lexicographic order."""
    if not 0 <= m <= binom(n, k):
        raise InputError(f"segment size {m} outside 0..C({n},{k})")
    combos = itertools.islice(itertools.combinations(range(1, n + 1), k), m)
    return UniformFamily(n, k, (mask_of(c, n) for c in combos))


def lex_compress(fam: UniformFamily) -> UniformFamily:
    """The initial lexicographic segment of the same size."""
    if not isinstance(fam, UniformFamily):
        raise InputError("lex_compress needs a uniform family")
    return lex_segment(fam.n, fam.k, len(fam))


def colex_segment(n: int, k: int, m: int) -> UniformFamily:
    """The first m k-subsets of [n] in colexicographic order.

    Colex compares largest elements first; its initial segments are the
    exact lower-shadow minimizers (Kruskal-Katona), whereas lex initial
    segments are the right object for cross-intersecting compression.
    """
    if not 0 <= m <= binom(n, k):
        raise InputError(f"segment size {m} outside 0..C({n},{k})")
    masks = []
    if k == 0:
        return UniformFamily(n, 0, [0] if m else [])
    for top in range(k - 1, n):
        for rest in itertools.combinations(range(top), k - 1):
            if len(masks) == m:
                return UniformFamily(n, k, masks)
            masks.append((1 << top) | sum(1 << c for c in rest))
    return UniformFamily(n, k, masks)


def colex_compress(fam: UniformFamily) -> UniformFamily:
    """The initial colex segment of the same size; never grows the shadow."""
    if not isinstance(fam, UniformFamily):
        raise InputError("colex_compress needs a uniform family")
    return colex_segment(fam.n, fam.k, len(fam))


# ---------------------------------------------------------------------------
# cross-intersecting audits


def _require_cross(famA: SetFamily, famB: SetFamily, name: str):
    ok, wit = cross_intersecting(famA, famB)
    if not ok:
        raise ContractError(f"{name}: families are not cross-intersecting, witness {wit}")


def kk_cross_bound_audit(famA: UniformFamily, famB: UniformFamily, r: int) -> AuditReport:
    """Shadow-based bound: |A| >= C(n,k) - C(n-r,k) forces |B| <= C(n-r,l-r).

    The report also evaluates the underlying shadow chain: the
    (n-k-l)-fold lower shadow of the complement family of A must have
    size at least C(n,l) - C(n-r,l-r).
    """
    if famA.n != famB.n:
        raise InputError("families live on different ground sets")
    n, k, l = famA.n, famA.k, famB.k
    if r < 0:
        raise InputError("r must be nonnegative")
    if n < k + l:
        raise ContractError("precondition n >= k + l fails")
    _require_cross(famA, famB, "kk_cross_bound_audit")
    need = binom(n, k) - binom(n - r, k)
    if len(famA) < need:
        raise ContractError(
            f"precondition |A| >= C(n,k) - C(n-r,k) fails: {len(famA)} < {need}"
        )
    bound = binom(n - r, l - r)
    full = (1 << n) - 1
    complements = UniformFamily(n, n - k, (full ^ m for m in famA.members))
    shadow = iterated_shadow(complements, n - k - l)
    chain_bound = binom(n, l) - binom(n - r, l - r)
    return AuditReport(
        name="kk-cross-bound",
        passed=len(famB) <= bound,
        values={
            "n": n,
            "k": k,
            "l": l,
            "r": r,
            "size_A": len(famA),
            "size_B": len(famB),
            "bound_B": bound,
            "shadow_chain_size": len(shadow),
            "shadow_chain_lower_bound": chain_bound,
            "shadow_chain_ok": len(shadow) >= chain_bound,
        },
    )


def weighted_cross_bound_audit(
    famA: UniformFamily,
    famB: UniformFamily,
    C_weight,
    d: int,
    eta,
    c0: int,
) -> AuditReport:
    """|A| + C |B| <= C(n,l) - C(n-d,l) + C * C(n-d,k-d) on admissible pairs.

    A lives on layer l, B on layer k.  The admissibility constant c0 is
    an explicit argument; the preconditions checked are
    n >= (1+eta) l + k + c0, l >= k + c0 - 1, cross-intersection, and
    |A| <= C(n,l) - C(n-d,l).
    """
    if famA.n != famB.n:
        raise InputError("families live on different ground sets")
    n, l, k = famA.n, famA.k, famB.k
    if d < 0 or c0 < 0 or C_weight < 0:
        raise InputError("d, c0 and the weight must be nonnegative")
    if not n >= (1 + eta) * l + k + c0:
        raise ContractError("precondition n >= (1+eta) l + k + c0 fails")
    if not l >= k + c0 - 1:
        raise ContractError("precondition l >= k + c0 - 1 fails")
    _require_cross(famA, famB, "weighted_cross_bound_audit")
    cap = binom(n, l) - binom(n - d, l)
    if len(famA) > cap:
        raise ContractError(f"precondition |A| <= C(n,l) - C(n-d,l) fails: {len(famA)} > {cap}")
    lhs = len(famA) + C_weight * len(famB)
    rhs = cap + C_weight * binom(n - d, k - d)
    return AuditReport(
        name="weighted-cross-bound",
        passed=lhs <= rhs,
        values={
            "n": n,
            "l": l,
            "k": k,
            "d": d,
            "C": C_weight,
            "eta": eta,
            "c0": c0,
            "lhs": lhs,
            "rhs": rhs,
            "size_A": len(famA),
            "size_B": len(famB),
        },
    )


def weighted_chain_feasible(n: int, l: int, k: int, C_weight) -> bool:
    """Sufficient finite check that the weighted bound holds for these sizes.

    Verifies, along the induction chain (n-2i, l-i, k-i) down to k = 0,
    the two binomial comparisons the inductive proof consumes.  When
    this returns True the audit is guaranteed to pass on every
    admissible cross-intersecting pair of these uniformities.
    """
    ni, li, ki = n, l, k
    while ki >= 1:
        if C_weight * binom(ni - 1, ki - 1) > binom(ni - 2, li - 1):
            return False
        if C_weight * binom(ni, ki) > binom(ni - 2, li - 1):
            return False
        ni, li, ki = ni - 2, li - 1, ki - 1
    return True


def from_david_bound_audit(
    famF: UniformFamily,
    famG: UniformFamily,
    M,
    c: int,
    d: int,
    j: int | None = None,
) -> AuditReport:
    """|F| + M |G| <= C(n,k1) - C(n-d,k1) + M * C(n-d,k2-d).

    F lives on layer k1 and G on layer k2; requires
    C(n-d, k2-d) <= |G| <= C(n-c, k2-c) for the supplied c <= d <= k2,
    |k2 - k1| <= j, and cross-intersection.
    """
    if famF.n != famG.n:
        raise InputError("families live on different ground sets")
    n, k1, k2 = famF.n, famF.k, famG.k
    if j is None:
        j = abs(k2 - k1)
    if abs(k2 - k1) > j:
        raise ContractError(f"precondition |k2 - k1| <= j fails: {abs(k2-k1)} > {j}")
    if not c <= d <= k2:
        raise ContractError(f"precondition c <= d <= k2 fails: c={c}, d={d}, k2={k2}")
    lo, hi = binom(n - d, k2 - d), binom(n - c, k2 - c)
    if not lo <= len(famG) <= hi:
        raise ContractError(
            f"precondition C(n-d,k2-d) <= |G| <= C(n-c,k2-c) fails: {lo} <= {len(famG)} <= {hi}"
        )
    _require_cross(famF, famG, "from_david_bound_audit")
    lhs = len(famF) + M * len(famG)
    rhs = binom(n, k1) - binom(n - d, k1) + M * binom(n - d, k2 - d)
    return AuditReport(
        name="from-david-bound",
        passed=lhs <= rhs,
        values={
            "n": n,
            "k1": k1,
            "k2": k2,
            "M": M,
            "c": c,
            "d": d,
            "lhs": lhs,
            "rhs": rhs,
        },
    )


# ---------------------------------------------------------------------------
# biased cross-intersecting bounds


def detect_and_base(fam: SetFamily):
    """The base B with fam = {S : B subset of S}, or None."""
    if not fam.members:
        return None
    inter = (1 << fam.n) - 1
    for m in fam.members:
        inter &= m
    if len(fam) == 1 << (fam.n - popcount(inter)):
        return inter
    return None


def detect_or_base(fam: SetFamily):
    """The base B with fam = {S : S cap B nonempty}, or None."""
    n = fam.n
    fam.require_dense("or-family detection")
    union_out = 0
    count_out = 0
    members = fam.members
    for m in range(1 << n):
        if m not in members:
            union_out |= m
            count_out += 1
    base = ((1 << n) - 1) ^ union_out
    if count_out == 1 << (n - popcount(base)):
        return base
    return None


def biased_cross_bounds_audit(famF: SetFamily, famG: SetFamily, p: Bias, tol: float = 1e-12) -> AuditReport:
    """Power bound mu_p(F) <= (1 - mu_p(G))^(log_{1-p} p) and the
    half-biased sum bound mu_{1/2}(F) + mu_{1/2}(G) <= 1.

    Detects the tight pair: F all supersets of a base set, G all sets
    meeting it, for the same base.
    """
    p = check_bias(p)
    if not 0 < float(p) <= 0.5:
        raise InputError("power bound needs 0 < p <= 1/2")
    _require_cross(famF, famG, "biased_cross_bounds_audit")
    mu_f = mu_biased(famF, p)
    mu_g = mu_biased(famG, p)
    pf, qf = float(p), 1.0 - float(p)
    if float(mu_g) >= 1.0:
        power_rhs = 0.0
    elif qf == pf:
        power_rhs = 1.0 - float(mu_g)
    else:
        power_rhs = (1.0 - float(mu_g)) ** (log(pf) / log(qf))
    power_ok = float(mu_f) <= power_rhs + tol
    half = Fraction(1, 2)
    sum_half = mu_biased(famF, half) + mu_biased(famG, half)
    sum_ok = sum_half <= 1
    and_base = detect_and_base(famF)
    or_base = detect_or_base(famG) if famG.n <= 20 else None
    tight_pair = and_base is not None and and_base == or_base
    equality = abs(float(mu_f) - power_rhs) <= tol
    return AuditReport(
        name="biased-cross-bounds",
        passed=power_ok and sum_ok,
        values={
            "mu_p_F": mu_f,
            "mu_p_G": mu_g,
            "power_rhs": power_rhs,
            "power_ok": power_ok,
            "sum_half": sum_half,
            "sum_ok": sum_ok,
            "tight_and_or_pair": tight_pair,
            "power_equality": equality,
        },
    )
