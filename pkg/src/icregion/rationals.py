"""Helpers for exact rational probabilities and their string form.

Probability entries may be given as JSON numbers (floats), decimal strings
("0.125"), or rational strings ("1/8").  String inputs are parsed exactly;
serialization of exact values uses the "num/den" form so that
parse -> serialize -> parse is the identity.
"""

from __future__ import annotations

import math
from fractions import Fraction


def parse_prob(value) -> Fraction | float:
    """Parse a probability entry; strings become exact Fractions."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"not a probability: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        return Fraction(value)  # accepts "3/4", "0.75", "1"
    raise ValueError(f"not a probability: {value!r}")


def format_prob(value) -> str | float:
    """Inverse of parse_prob: Fractions to "num/den" strings, floats as-is."""
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return float(value)


def as_float(value) -> float:
    return float(value)


def to_fraction(value) -> Fraction:
    """Exact conversion; floats map to their binary expansion."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value}")
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise ValueError(f"cannot convert {value!r} to a rational")


def all_rational(values) -> bool:
    return all(isinstance(v, (Fraction, int)) for v in values)


def common_denominator(fracs) -> int:
    d = 1
    for f in fracs:
        d = math.lcm(d, Fraction(f).denominator)
    return d
