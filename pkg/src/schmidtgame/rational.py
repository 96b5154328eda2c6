"""Exact rational scalars and their "p/q" string encoding."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ``value`` to a Fraction, rejecting floats and decimal strings.

    Floats are refused because their binary value is rarely what the caller
    meant; strings must look like ``"p/q"`` or ``"p"``.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"decimal notation is not accepted: {text!r}; use p/q")
    num, sep, den = text.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational of the form p/q: {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def floor_log2(x: Fraction) -> int:
    """Largest integer e with 2**e <= x, for x > 0 (exact)."""
    if x <= 0:
        raise ValueError("floor_log2 needs x > 0")
    e = x.numerator.bit_length() - x.denominator.bit_length()
    # the estimate is off by at most one in either direction
    while _pow2(e) > x:
        e -= 1
    while _pow2(e + 1) <= x:
        e += 1
    return e


def exact_log2(x: Fraction) -> int | None:
    """Return e if x == 2**e exactly, else None."""
    x = Fraction(x)
    if x <= 0:
        return None
    p, q = x.numerator, x.denominator
    if p & (p - 1) == 0 and q & (q - 1) == 0:
        return (p.bit_length() - 1) - (q.bit_length() - 1)
    return None


def log2(x: Fraction | int) -> float:
    """Float log2 that stays accurate for huge numerators/denominators."""
    x = Fraction(x)
    return math.log2(x.numerator) - math.log2(x.denominator)


def _pow2(e: int) -> Fraction:
    return Fraction(2**e) if e >= 0 else Fraction(1, 2 ** (-e))
