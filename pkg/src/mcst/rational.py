"""Exact rational parsing/formatting helpers."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

SQRT_BITS = 30


def to_fraction(value) -> Fraction:
    """Parse an int, decimal/ratio string, float literal or ``{"num", "den"}`` pair."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("boolean is not a rational")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        # repr gives the shortest decimal that round-trips; parse that exactly
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, dict) and set(value) == {"num", "den"}:
        return Fraction(int(value["num"]), int(value["den"]))
    raise TypeError(f"cannot interpret {value!r} as a rational")


def fraction_to_json(q: Fraction):
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return {"num": q.numerator, "den": q.denominator}


def sqrt_upper(k: int, bits: int = SQRT_BITS) -> Fraction:
    """Smallest multiple of 2**-bits that is >= sqrt(k)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    scaled = k << (2 * bits)
    root = math.isqrt(scaled)
    if root * root < scaled:
        root += 1
    return Fraction(root, 1 << bits)
