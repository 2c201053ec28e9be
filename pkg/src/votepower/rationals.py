"""Exact rational helpers used across the package.

The package-wide exact scalar is :class:`fractions.Fraction`.  This
module adds the parsing/formatting conventions for file formats and the
CLI, plus :class:`ExactRatio`, an *unreduced* big-integer ratio used
where Fraction's per-operation gcd would be quadratic-time poison (deep
broadcast-tree recursions whose denominators reach millions of digits).
"""

from __future__ import annotations

import math
from fractions import Fraction

from .exceptions import InvalidInput

__all__ = ["parse_rational", "format_rational", "decimal_str", "ExactRatio"]


def parse_rational(value) -> Fraction:
    """Parse an exact rational from its serialized form.

    Accepts ``"p/q"``, integer strings, decimal strings (``"0.6"`` means
    exactly 3/5), Python ints and Fractions.  Floats are converted via
    their shortest decimal repr, so a JSON ``0.6`` also means 3/5; put
    rationals in strings when the distinction matters.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidInput(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        value = repr(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"not a rational: {value!r}") from exc
    raise InvalidInput(f"not a rational: {value!r}")


def format_rational(x: Fraction) -> str:
    """Serialize a Fraction as ``"p"`` or ``"p/q"``."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def decimal_str(x, sig: int = 12) -> str:
    """Format a real to ``sig`` significant digits."""
    return f"{float(x):.{sig}g}"


class ExactRatio:
    """An exact ratio num/den of big integers, never reduced.

    Supports exact comparison (cross-multiplication) against ints,
    Fractions and other ExactRatios, and float conversion by scaled
    integer division.  Arithmetic is deliberately absent: the deep
    recursions that produce these values work on raw integers and only
    wrap the results.  ``as_fraction()`` reduces, which may be slow for
    very large components; it is meant for shallow values.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int):
        if den == 0:
            raise InvalidInput("zero denominator")
        if den < 0:
            num, den = -num, -den
        self.num = num
        self.den = den

    def _cross(self, other) -> tuple[int, int]:
        # returns (a, b) with self <op> other  iff  a <op> b
        if isinstance(other, ExactRatio):
            return self.num * other.den, other.num * self.den
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return self.num * other.denominator, other.numerator * self.den
        return NotImplemented, None

    def __eq__(self, other):
        a, b = self._cross(other)
        if a is NotImplemented:
            return NotImplemented
        return a == b

    def __lt__(self, other):
        a, b = self._cross(other)
        if a is NotImplemented:
            return NotImplemented
        return a < b

    def __le__(self, other):
        a, b = self._cross(other)
        if a is NotImplemented:
            return NotImplemented
        return a <= b

    def __gt__(self, other):
        a, b = self._cross(other)
        if a is NotImplemented:
            return NotImplemented
        return a > b

    def __ge__(self, other):
        a, b = self._cross(other)
        if a is NotImplemented:
            return NotImplemented
        return a >= b

    def __hash__(self):
        return hash(self.as_fraction())

    def __float__(self):
        # (num << 80) // den has ~80 fractional bits; fine for the
        # probability-sized values this class carries.
        q = (self.num << 80) // self.den
        return math.ldexp(q, -80)

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __repr__(self):
        return (
            f"ExactRatio(~{float(self):.12g}, "
            f"{self.num.bit_length()}/{self.den.bit_length()} bits)"
        )
