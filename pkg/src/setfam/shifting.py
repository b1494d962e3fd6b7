"""Shifting operators, n-compression, measure-increase moves, and the
stability transformation pipeline.

The pipeline turns an increasing t-intersecting family into a junta by
an alternation of compression steps (which keep mu_p fixed) and
measure-increase steps (which strictly raise it), each step being a
small modification whose size is bounded by the influence of the
coordinate being retired.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from ._bits import elements_of, popcount
from .core import SetFamily, apply_permutation, is_t_intersecting, junta_generate, up_closure
from .errors import ContractError, InputError, ResourceError
from .measures import Bias, check_bias, influence, influences, mu_biased
from .report import format_value


def shift(fam: SetFamily, i: int, j: int) -> SetFamily:
    """Apply the shifting operator replacing element i by j.

    A member A with i in A, j not in A moves to A \\ {i} union {j}
    unless that set is already a member.  Size is preserved; for an
    increasing t-intersecting family the image is again increasing and
    t-intersecting, has the same mu_p, and the influence of i does not
    grow.
    """
    if i == j:
        raise InputError("shift needs distinct coordinates")
    if not (1 <= i <= fam.n and 1 <= j <= fam.n):
        raise InputError("shift coordinates out of range")
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    members = fam.members
    out = []
    for m in members:
        if m & bi and not m & bj:
            moved = (m ^ bi) | bj
            out.append(m if moved in members else moved)
        else:
            out.append(m)
    return fam.replace_members(out)


def is_n_compressed(fam: SetFamily, coord: int) -> bool:
    """Whether every shift into a smaller coordinate fixes the family."""
    if not 1 <= coord <= fam.n:
        raise InputError("coordinate out of range")
    bc = 1 << (coord - 1)
    members = fam.members
    for m in members:
        if not m & bc:
            continue
        for j in range(1, coord):
            bj = 1 << (j - 1)
            if not m & bj and ((m ^ bc) | bj) not in members:
                return False
    return True


def is_shifted(fam: SetFamily) -> bool:
    """Fixed under every shift S_ij with j < i."""
    return all(is_n_compressed(fam, coord) for coord in range(2, fam.n + 1))


# ---------------------------------------------------------------------------
# traces


@dataclass(frozen=True)
class PipelineStep:
    tag: str  # compress | increase-offdiag | increase-diag | up-close
    coords: tuple
    mu_before: Bias
    mu_after: Bias
    modification: Bias  # mu_p(F_before \ F_after)
    bound: Bias  # declared bound for the modification

    def line(self) -> str:
        cs = ",".join(str(c) for c in self.coords)
        return (
            f"{self.tag} [{cs}] mu_before={float(self.mu_before):.17g} "
            f"mu_after={float(self.mu_after):.17g} "
            f"modification={float(self.modification):.17g} "
            f"bound={float(self.bound):.17g}"
        )


@dataclass
class PipelineTrace:
    initial: SetFamily
    final: SetFamily
    steps: list = field(default_factory=list)
    stop_reason: str = ""
    iterations: int = 0

    def render_report(self) -> str:
        lines = [step.line() for step in self.steps]
        lines.append(f"stop = {self.stop_reason}")
        lines.append(f"iterations = {self.iterations}")
        lines.append(f"mu_initial = {format_value(self.mu_of_initial)}")
        lines.append(f"mu_final = {format_value(self.mu_of_final)}")
        return "\n".join(lines) + "\n"

    @property
    def mu_of_initial(self):
        return self.steps[0].mu_before if self.steps else None

    @property
    def mu_of_final(self):
        return self.steps[-1].mu_after if self.steps else None


def _mu_diff(before: SetFamily, after: SetFamily, p: Bias):
    removed = before.members - after.members
    if not removed:
        return Fraction(0) if isinstance(p, Fraction) else 0.0
    return mu_biased(before.replace_members(removed), p)


# ---------------------------------------------------------------------------
# compression by small modifications


def compress_to(fam: SetFamily, coord: int, p: Bias, t: int | None = None) -> PipelineTrace:
    """Shift the family until it is compressed at ``coord``.

    Repeatedly applies the shift into the smallest j < coord that moves
    the family.  Each step keeps mu_p constant, keeps the family
    increasing (and t-intersecting), modifies at most I_coord of mass,
    and strictly decreases I_coord, which forces termination.
    """
    p = check_bias(p)
    if not fam.is_increasing():
        raise ContractError("compression requires an increasing family")
    if t is not None:
        ok, wit = is_t_intersecting(fam, t)
        if not ok:
            raise ContractError(f"family is not {t}-intersecting: witness {wit}")
    trace = PipelineTrace(initial=fam, final=fam)
    current = fam
    infl = influence(current, coord, p)
    while True:
        nxt = None
        for j in range(1, coord):
            cand = shift(current, coord, j)
            if cand.members != current.members:
                nxt = (j, cand)
                break
        if nxt is None:
            break
        j, cand = nxt
        mu_before = mu_biased(current, p)
        mu_after = mu_biased(cand, p)
        new_infl = influence(cand, coord, p)
        # Claim-level audit; termination itself is guaranteed because each
        # applied shift strictly lowers the total element sum of the family.
        strict = new_infl < infl if isinstance(p, Fraction) else new_infl < infl + 1e-12
        if not strict:
            raise ContractError("shift failed to decrease the target influence")
        trace.steps.append(
            PipelineStep(
                tag="compress",
                coords=(coord, j),
                mu_before=mu_before,
                mu_after=mu_after,
                modification=_mu_diff(current, cand, p),
                bound=infl,
            )
        )
        current = cand
        infl = new_infl
    trace.final = current
    trace.stop_reason = "compressed"
    return trace


# ---------------------------------------------------------------------------
# measure increase


def _influential_with_top(fam: SetFamily):
    """Members containing the top coordinate whose deletion leaves the family."""
    n = fam.n
    top = 1 << (n - 1)
    return [m for m in fam.members if m & top and (m ^ top) not in fam.members]


def _check_increase_pre(fam: SetFamily, t: int, what: str):
    n = fam.n
    if not fam.is_increasing():
        raise ContractError(f"{what}: family must be increasing")
    if not is_n_compressed(fam, n):
        raise ContractError(f"{what}: family must be compressed at coordinate {n}")
    ok, wit = is_t_intersecting(fam, t)
    if not ok:
        raise ContractError(f"{what}: family is not {t}-intersecting: witness {wit}")


def increase_offdiagonal(fam: SetFamily, a: int, b: int, p: Bias, check: bool = True):
    """The two off-diagonal exchange families and the better of them.

    For a != b with a + b = n + t, removes the influential members of
    size a (resp. b) and adds the truncations of the influential members
    of size b (resp. a); both results are t-intersecting, and the better
    one has mu_p >= mu_p(F), strictly unless both exchanges are empty.

    Returns ``(G1, G2, chosen)``.
    """
    p = check_bias(p)
    n = fam.n
    t = a + b - n
    if a == b:
        raise InputError("off-diagonal move needs a != b")
    if t < 1:
        raise InputError(f"a + b = {a + b} must exceed n = {n} (t = a+b-n >= 1)")
    if check:
        _check_increase_pre(fam, t, "increase_offdiagonal")
    top = 1 << (n - 1)
    infl = _influential_with_top(fam)
    layer_a = [m for m in infl if popcount(m) == a]
    layer_b = [m for m in infl if popcount(m) == b]
    g1 = (fam.members - set(layer_a)) | {m ^ top for m in layer_b}
    g2 = (fam.members - set(layer_b)) | {m ^ top for m in layer_a}
    fam1 = fam.replace_members(g1)
    fam2 = fam.replace_members(g2)
    chosen = fam1 if mu_biased(fam1, p) >= mu_biased(fam2, p) else fam2
    return fam1, fam2, chosen


def diagonal_candidates(fam: SetFamily, t: int):
    """The exchange family G_i for every i < n (diagonal case a = (n+t)/2)."""
    n = fam.n
    if (n + t) % 2:
        raise ContractError("diagonal move needs n + t even")
    a = (n + t) // 2
    top = 1 << (n - 1)
    diag = [m for m in _influential_with_top(fam) if popcount(m) == a]
    for i in range(1, n):
        bi = 1 << (i - 1)
        removed = {m for m in diag if m & bi}
        added = {m ^ top for m in diag if not m & bi}
        yield i, fam.replace_members((fam.members - removed) | added)


def increase_diagonal(fam: SetFamily, t: int, p: Bias, zeta=None, check: bool = True):
    """Best diagonal exchange family over i in [n-1].

    Preconditions (each reported by name on failure): n + t even, family
    increasing, compressed at n, t-intersecting, coordinate n
    influential, and the influential members of size (n+t)/2 nonempty.
    With p <= 1/2 - zeta and n > t/(2 zeta) the best candidate strictly
    increases mu_p.

    Returns ``(best, i_best)``.
    """
    p = check_bias(p)
    n = fam.n
    if (n + t) % 2:
        raise ContractError("parity precondition fails: n + t must be even")
    if check:
        _check_increase_pre(fam, t, "increase_diagonal")
    if zeta is not None:
        if not p <= Fraction(1, 2) - Fraction(zeta):
            raise ContractError("bias precondition fails: need p <= 1/2 - zeta")
        if not n > t / (2 * float(zeta)):
            raise ContractError("size precondition fails: need n > t/(2 zeta)")
    a = (n + t) // 2
    infl = _influential_with_top(fam)
    if not infl:
        raise ContractError("emptiness precondition fails: coordinate n has zero influence")
    if not any(popcount(m) == a for m in infl):
        raise ContractError(
            f"emptiness precondition fails: no influential member of size {a}"
        )
    best = None
    for i, cand in diagonal_candidates(fam, t):
        mu = mu_biased(cand, p)
        if best is None or mu > best[0]:
            best = (mu, i, cand)
    _, i_best, cand = best
    return cand, i_best


# ---------------------------------------------------------------------------
# the full pipeline


def default_coord_threshold(t: int, zeta) -> int:
    """Stop the pipeline once at most this many coordinates are live.

    Any proceeding iteration then has m >= threshold + 1 > t/(2 zeta)
    live coordinates, which is what the diagonal increase step needs.
    """
    return max(t, math.floor(t / (2 * float(zeta))))


def stability_pipeline(
    fam: SetFamily,
    p: Bias,
    t: int,
    c,
    zeta=None,
    coord_threshold: int | None = None,
    max_iters: int = 1000,
) -> PipelineTrace:
    """Transform an increasing t-intersecting family into a junta.

    Each iteration relabels the live coordinates so the one of least
    influence sits on top, compresses it away (mu_p constant), performs
    one measure-increase step, and re-takes the up-closure.  The run
    stops when at most ``coord_threshold`` coordinates are live or every
    live influence is at least c/2.  While running, every recorded
    modification is below c/2, and mu_p never decreases.
    """
    p = check_bias(p)
    if not 0 < float(p) < 0.5:
        raise InputError("pipeline needs 0 < p < 1/2")
    if not c > 0:
        raise InputError("pipeline needs c > 0")
    if zeta is None:
        zeta = Fraction(1, 2) - p if isinstance(p, Fraction) else 0.5 - p
    if coord_threshold is None:
        coord_threshold = default_coord_threshold(t, zeta)
    if not fam.is_increasing():
        raise ContractError("pipeline requires an increasing family")
    ok, wit = is_t_intersecting(fam, t)
    if not ok:
        raise ContractError(f"pipeline requires a {t}-intersecting family: witness {wit}")

    n = fam.n
    trace = PipelineTrace(initial=fam, final=fam)
    current = fam
    half_c = c / 2

    for _ in range(max_iters):
        infl = influences(current, p)
        live = [i for i in range(1, n + 1) if infl[i - 1] > 0]
        m = len(live)
        if m <= coord_threshold:
            trace.stop_reason = f"junta on {m} coordinates (threshold {coord_threshold})"
            break
        min_infl = min(infl[i - 1] for i in live)
        if min_infl >= half_c:
            trace.stop_reason = f"minimum live influence {float(min_infl):.6g} >= c/2"
            break
        trace.iterations += 1

        target = min(
            (i for i in live if infl[i - 1] == min_infl)
        )  # deterministic: smallest coordinate of least influence
        # relabel: live coordinates to 1..m with the target on top (position m)
        order = [i for i in live if i != target] + [target]
        order += [i for i in range(1, n + 1) if i not in live]
        sigma = {orig: pos + 1 for pos, orig in enumerate(order)}
        inverse = {pos: orig for orig, pos in sigma.items()}
        relabeled = apply_permutation(current, sigma)
        live_mask = (1 << m) - 1
        restricted = SetFamily(m, {mem & live_mask for mem in relabeled.members})

        ctrace = compress_to(restricted, m, p, t=None)
        for step in ctrace.steps:
            trace.steps.append(
                PipelineStep(
                    tag=step.tag,
                    coords=tuple(inverse[cc] for cc in step.coords),
                    mu_before=step.mu_before,
                    mu_after=step.mu_after,
                    modification=step.modification,
                    bound=step.bound,
                )
            )
        compressed = ctrace.final
        top_infl = influence(compressed, m, p)
        if top_infl > 0:
            worked = _one_increase_step(compressed, m, t, p, trace, inverse, top_infl)
        else:
            worked = compressed

        closed = up_closure(worked)
        trace.steps.append(
            PipelineStep(
                tag="up-close",
                coords=(),
                mu_before=mu_biased(worked, p),
                mu_after=mu_biased(closed, p),
                modification=Fraction(0) if isinstance(p, Fraction) else 0.0,
                bound=Fraction(0) if isinstance(p, Fraction) else 0.0,
            )
        )
        lifted = junta_generate(n, list(range(1, m + 1)), closed.members)
        current = apply_permutation(lifted, {pos: orig for pos, orig in inverse.items()})
    else:
        raise ResourceError(
            f"pipeline did not reach its stop condition within {max_iters} iterations"
        )

    trace.final = current
    return trace


def _one_increase_step(fam, m, t, p, trace, inverse, bound):
    """Pick and apply a single measure-increase move at the top coordinate."""
    infl = _influential_with_top(fam)
    sizes = sorted({popcount(mem) for mem in infl})
    diag = (m + t) // 2 if (m + t) % 2 == 0 else None
    mu_before = mu_biased(fam, p)
    if diag is not None and diag in sizes:
        result, i_best = increase_diagonal(fam, t, p, check=False)
        tag, coords = "increase-diag", (inverse[i_best],)
    else:
        # every influential size a >= t pairs with a valid b = m+t-a <= m
        pairs = sorted({(min(a, m + t - a), max(a, m + t - a)) for a in sizes if 2 * a != m + t})
        best = None
        for a, b in pairs:
            _, _, chosen = increase_offdiagonal(fam, a, b, p, check=False)
            mu = mu_biased(chosen, p)
            if best is None or mu > best[0]:
                best = (mu, a, b, chosen)
        if best is None:
            raise ContractError("no admissible increase step found")
        _, a, b, result = best
        tag, coords = "increase-offdiag", (a, b)
    trace.steps.append(
        PipelineStep(
            tag=tag,
            coords=coords,
            mu_before=mu_before,
            mu_after=mu_biased(result, p),
            modification=_mu_diff(fam, result, p),
            bound=bound,
        )
    )
    return result
