"""Parsing and formatting of exact rationals as "num/den" strings."""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError


def parse_rational(value) -> Fraction:
    """Accept "3/2", "7", or a JSON integer.  Floats are rejected."""
    if isinstance(value, bool):
        raise ParseError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational: {value!r}") from exc
    raise ParseError(f"not a rational: {value!r} (floats are not exact)")


def format_rational(value: Fraction) -> str:
    """Lowest terms, positive denominator; "3" rather than "3/1"."""
    return str(Fraction(value))
