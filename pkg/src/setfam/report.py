"""Uniform result/report objects shared by the audit operations and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


def format_value(v) -> str:
    """Exact values as fractions, floats with 17 significant digits."""
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator)
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.17g}"
    if isinstance(v, (tuple, list)):
        return "[" + ", ".join(format_value(x) for x in v) + "]"
    return str(v)


@dataclass
class AuditReport:
    """Result of evaluating an inequality on a concrete instance."""

    name: str
    passed: bool
    values: dict = field(default_factory=dict)
    notes: tuple = ()

    def lines(self):
        out = [f"audit = {self.name}", f"passed = {format_value(self.passed)}"]
        for key, val in self.values.items():
            out.append(f"{key} = {format_value(val)}")
        for note in self.notes:
            out.append(f"note = {note}")
        return out

    def render(self) -> str:
        return "\n".join(self.lines()) + "\n"
