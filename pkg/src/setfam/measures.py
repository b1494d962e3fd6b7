"""Uniform and p-biased measures, influences, and related audits.

Arithmetic policy: whenever the bias p is given as a `fractions.Fraction`,
measures and influences are computed as exact rationals; a float p gives
binary64 results.  Comparison tolerances are explicit parameters and
default to 1e-9 (1e-12 for the isoperimetric audit, which also has a
certified exact path for rational p).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, log, sqrt

import mpmath

from ._bits import popcount
from .core import SetFamily, UniformFamily
from .errors import ContractError, InputError

Bias = Fraction | float


def check_bias(p: Bias) -> Bias:
    if isinstance(p, Fraction):
        if not 0 < p < 1:
            raise InputError(f"bias p={p} outside (0,1)")
        return p
    p = float(p)
    if not 0.0 < p < 1.0:
        raise InputError(f"bias p={p} outside (0,1)")
    return p


def point_weight(p: Bias, size: int, n: int):
    """mu_p weight of a single set of the given size."""
    q = (1 - p) if isinstance(p, Fraction) else (1.0 - p)
    return p**size * q ** (n - size)


# ---------------------------------------------------------------------------
# measures


def mu_uniform(fam: UniformFamily) -> Fraction:
    """|F| / binom(n, k), exact."""
    if not isinstance(fam, UniformFamily):
        raise InputError("mu_uniform needs a uniform family")
    return Fraction(len(fam), comb(fam.n, fam.k))


def mu_biased(fam: SetFamily, p: Bias):
    """mu_p(F) = sum over members of p^|A| (1-p)^(n-|A|).

    Exact rational when p is a Fraction, float otherwise.
    """
    p = check_bias(p)
    hist = fam.popcount_histogram()
    total = Fraction(0) if isinstance(p, Fraction) else 0.0
    for c, cnt in enumerate(hist):
        if cnt:
            total += cnt * point_weight(p, c, fam.n)
    return total


def influence(fam: SetFamily, i: int, p: Bias):
    """mu_p of the set of points where flipping coordinate i changes membership."""
    p = check_bias(p)
    if not 1 <= i <= fam.n:
        raise InputError(f"coordinate {i} outside 1..{fam.n}")
    bit = 1 << (i - 1)
    n = fam.n
    hist = [0] * (n + 1)
    for m in fam.members:
        if (m ^ bit) not in fam.members:
            # both m and its flip are i-influential points
            hist[popcount(m & ~bit)] += 1
    total = Fraction(0) if isinstance(p, Fraction) else 0.0
    for c, cnt in enumerate(hist):
        if cnt:
            total += cnt * (point_weight(p, c, n) + point_weight(p, c + 1, n))
    return total


def influences(fam: SetFamily, p: Bias):
    return [influence(fam, i, p) for i in range(1, fam.n + 1)]


def total_influence(fam: SetFamily, p: Bias):
    vec = influences(fam, p)
    return sum(vec[1:], vec[0]) if vec else 0


@dataclass(frozen=True)
class MeasureReport:
    mu: Bias
    influences: tuple
    total: Bias


def measure_report(fam: SetFamily, p: Bias) -> MeasureReport:
    vec = tuple(influences(fam, p))
    return MeasureReport(mu=mu_biased(fam, p), influences=vec, total=sum(vec))


def derivative_mu(fam: SetFamily, p: float, step: float = 1e-4) -> float:
    """Central-difference d mu_p / dp; error O(step^2).

    Equals the total influence when the family is increasing
    (Margulis-Russo).
    """
    p = float(p)
    if not (0 < p - step and p + step < 1):
        raise InputError("step too large for this p")
    hi = mu_biased(fam, p + step)
    lo = mu_biased(fam, p - step)
    return (hi - lo) / (2 * step)


def fourier_level1(fam: SetFamily, p: Bias):
    """Degree-1 Fourier coefficients w.r.t. the p-biased orthonormal basis.

    With chi_i(S) = (1_{i in S} - p)/sqrt(p(1-p)), the coefficient of
    chi_i is (mu_p(F cap D_i) - p mu_p(F)) / sqrt(p(1-p)).  For an
    increasing family the total influence equals
    sum_i fhat({i}) / sqrt(p(1-p)).
    """
    p = check_bias(p)
    n = fam.n
    mu = mu_biased(fam, p)
    denom = sqrt(float(p) * (1.0 - float(p)))
    out = []
    for i in range(1, n + 1):
        bit = 1 << (i - 1)
        hist = [0] * (n + 1)
        for m in fam.members:
            if m & bit:
                hist[popcount(m)] += 1
        mu_and = Fraction(0) if isinstance(p, Fraction) else 0.0
        for c, cnt in enumerate(hist):
            if cnt:
                mu_and += cnt * point_weight(p, c, n)
        out.append(float(mu_and - p * mu) / denom)
    return out


# ---------------------------------------------------------------------------
# isoperimetric inequality  p I^p(F) >= mu_p(F) log_p mu_p(F)


def isoperimetry_check(fam: SetFamily, p: Bias, tol: float = 1e-12):
    """Evaluate both sides of the biased isoperimetric inequality.

    Returns ``(lhs, rhs, holds)`` with lhs = p I^p(F) and
    rhs = mu_p(F) log_p(mu_p(F)).  The family must be increasing.  For a
    rational p the verdict is certified exactly (see
    :func:`compare_isoperimetry_exact`); for float p it is a tolerance
    comparison.
    """
    p = check_bias(p)
    if not fam.is_increasing():
        raise ContractError("isoperimetry audit requires an increasing family")
    mu = mu_biased(fam, p)
    ti = total_influence(fam, p)
    lhs_exact = p * ti
    lhs = float(lhs_exact)
    if mu == 0 or mu == 1:
        rhs = 0.0
        return lhs, rhs, True
    rhs = float(mu) * log(float(mu)) / log(float(p))
    if isinstance(p, Fraction):
        # multiplying both sides by ln(1/p) > 0 turns the inequality into
        #   (p I) ln(1/p) >= mu ln(1/mu)
        sign = compare_weighted_logs(lhs_exact, 1 / p, mu, 1 / mu)
        holds = sign >= 0
    else:
        holds = lhs >= rhs - tol
    return lhs, rhs, holds


@lru_cache(maxsize=None)
def _prime_exponents(num: int) -> tuple:
    """Prime factorization exponents of a positive integer, as sorted pairs."""
    out = []
    d = 2
    m = num
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


def _exponent_vector(fr: Fraction) -> dict:
    vec: dict[int, int] = {}
    for q, e in _prime_exponents(fr.numerator):
        vec[q] = vec.get(q, 0) + e
    for q, e in _prime_exponents(fr.denominator):
        vec[q] = vec.get(q, 0) - e
    return {q: e for q, e in vec.items() if e}


def _log_ratio(a: Fraction, b: Fraction):
    """ln(b)/ln(a) as an exact Fraction when a,b are multiplicatively
    dependent rationals > 1; None when independent."""
    ea = _exponent_vector(a)
    eb = _exponent_vector(b)
    if not eb:
        return Fraction(0)
    if not ea:
        return None
    if set(ea) != set(eb):
        return None
    q0 = next(iter(ea))
    ratio = Fraction(eb[q0], ea[q0])
    for q, e in ea.items():
        if eb[q] != ratio * e:
            return None
    return ratio


def compare_weighted_logs(x: Fraction, a: Fraction, y: Fraction, b: Fraction) -> int:
    """Exact sign of x*ln(a) - y*ln(b) for rationals x,y >= 0 and a,b >= 1.

    Uses multiplicative dependence of a and b when present (reducing to a
    rational comparison), and otherwise a certified interval evaluation:
    for multiplicatively independent rationals the two terms can only be
    equal when one of the coefficients vanishes, so interval refinement
    terminates.
    """
    if a == 1 or x == 0:
        lhs_zero = True
    else:
        lhs_zero = False
    if b == 1 or y == 0:
        rhs_zero = True
    else:
        rhs_zero = False
    if lhs_zero and rhs_zero:
        return 0
    if lhs_zero:
        return -1
    if rhs_zero:
        return 1
    ratio = _log_ratio(a, b)
    if ratio is not None:
        # y*ln b = y*ratio*ln a, and ln a > 0
        diff = x - y * ratio
        return (diff > 0) - (diff < 0)
    iv = mpmath.iv
    saved = iv.prec
    try:
        prec = 64
        while prec <= 4096:
            iv.prec = prec
            term = iv.mpf(x.numerator) / iv.mpf(x.denominator) * iv.log(
                iv.mpf(a.numerator) / iv.mpf(a.denominator)
            ) - iv.mpf(y.numerator) / iv.mpf(y.denominator) * iv.log(
                iv.mpf(b.numerator) / iv.mpf(b.denominator)
            )
            if term > 0:
                return 1
            if term < 0:
                return -1
            prec *= 2
    finally:
        iv.prec = saved
    raise ContractError("could not certify the sign of the log comparison")
