"""Text file format for set families.

Format: a header line ``n k`` (with ``k = *`` for families that are not
uniform), then one member per line as space-separated ascending
integers; a blank line encodes the empty set.  The format is strict so
that ``parse(render(F)) == F``: duplicate members, unordered lines and
out-of-range elements are rejected.
"""

from __future__ import annotations

from fractions import Fraction

from .core import SetFamily, UniformFamily
from .errors import InputError


def render_family(fam: SetFamily) -> str:
    k = fam.uniformity()
    header = f"{fam.n} {'*' if k is None else k}"
    lines = [header]
    for elems in fam.as_sets():
        lines.append(" ".join(str(e) for e in elems))
    return "\n".join(lines) + "\n"


def parse_family(text: str) -> SetFamily:
    lines = text.splitlines()
    if not lines:
        raise InputError("empty family file")
    head = lines[0].split()
    if len(head) != 2:
        raise InputError(f"bad header line {lines[0]!r}; expected 'n k'")
    try:
        n = int(head[0])
    except ValueError as exc:
        raise InputError(f"bad ground set size {head[0]!r}") from exc
    k = None
    if head[1] != "*":
        try:
            k = int(head[1])
        except ValueError as exc:
            raise InputError(f"bad layer index {head[1]!r}") from exc
    seen = set()
    masks = []
    for ln, line in enumerate(lines[1:], start=2):
        parts = line.split()
        elems = []
        for token in parts:
            try:
                elems.append(int(token))
            except ValueError as exc:
                raise InputError(f"line {ln}: bad element {token!r}") from exc
        if any(b <= a for a, b in zip(elems, elems[1:])):
            raise InputError(f"line {ln}: elements must be strictly ascending")
        for e in elems:
            if not 1 <= e <= n:
                raise InputError(f"line {ln}: element {e} out of range 1..{n}")
        mask = 0
        for e in elems:
            mask |= 1 << (e - 1)
        if mask in seen:
            raise InputError(f"line {ln}: duplicate member")
        seen.add(mask)
        masks.append(mask)
    if k is None:
        return SetFamily(n, masks)
    return UniformFamily(n, k, masks)


def read_family(path) -> SetFamily:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_family(fh.read())


def write_family(path, fam: SetFamily):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_family(fam))


def parse_bias(text: str):
    """Parse a bias: 'a/b' gives an exact Fraction, a decimal gives a float."""
    text = text.strip()
    try:
        if "/" in text:
            return Fraction(text)
        return float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad probability {text!r}") from exc
