"""Exact rational parsing and serialization helpers.

All bound values that are rational by construction are kept as
``fractions.Fraction`` end to end; floats only appear where a quantity is
genuinely irrational (spectral bounds).
"""

from __future__ import annotations

import math
from fractions import Fraction


def parse_rational(value: object, location: str = "value") -> Fraction:
    """Parse an exact rational from ``"p/q"``, ``"p"`` or a plain integer.

    Floats are rejected on purpose: a binary float silently changes the
    exact value of a weight or probability.
    """
    if isinstance(value, bool):
        raise ValueError(f"{location}: expected a rational, got a boolean")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise ValueError(
            f"{location}: floats are not accepted, use an integer or a 'p/q' string"
        )
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"{location}: not a valid rational: {value!r}") from exc
    raise ValueError(f"{location}: expected a rational, got {type(value).__name__}")


def format_rational(q: Fraction) -> str:
    """Render a Fraction as ``"p/q"`` (or ``"p"`` when the denominator is 1)."""
    return str(Fraction(q))


def format_float(x: float) -> str:
    """Render a float with 9 significant digits (report serialization contract)."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(float(x), ".9g")


def round_float(x: float) -> float:
    """Round a float to 9 significant digits; stable under repeated application."""
    if math.isinf(x) or math.isnan(x):
        return x
    return float(format_float(x))
