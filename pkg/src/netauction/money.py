"""Exact currency arithmetic.

All payments, costs and reserve values are ``fractions.Fraction`` so that
utility comparisons are exact: the deviation fuzzer looks for *strict*
improvements, and floating point would fabricate or hide them.  Floats are
only accepted at file boundaries and converted exactly.
"""

from __future__ import annotations

from fractions import Fraction

Money = Fraction

ZERO = Fraction(0)


def parse_money(value) -> Fraction:
    """Parse an int, decimal string, "p/q" string or Fraction exactly.

    Floats are refused: JSON loading routes decimals through strings so
    nothing is rounded on the way in.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"not a money value: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse money value {value!r}") from exc
    raise ValueError(f"cannot parse money value {value!r} of type {type(value).__name__}")


def format_money(value: Fraction) -> str:
    """Render exactly: integer, terminating decimal, or "p/q"."""
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    # terminating decimal iff denominator is of the form 2^a * 5^b
    for p in (2, 5):
        while den % p == 0:
            den //= p
    if den == 1:
        digits = 0
        den = value.denominator
        scaled = value
        while scaled.denominator != 1:
            scaled *= 10
            digits += 1
        text = str(abs(scaled.numerator)).rjust(digits + 1, "0")
        sign = "-" if value < 0 else ""
        return f"{sign}{text[:-digits]}.{text[-digits:]}"
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value: Fraction, places: int = 6) -> str:
    """Fixed-point decimal rendering (round half to even), for CSV output."""
    scale = 10**places
    scaled = value * scale
    whole = scaled.numerator // scaled.denominator
    rem = scaled - whole
    if rem > Fraction(1, 2) or (rem == Fraction(1, 2) and whole % 2):
        whole += 1
    sign = "-" if whole < 0 else ""
    text = str(abs(whole)).rjust(places + 1, "0")
    return f"{sign}{text[:-places]}.{text[-places:]}"


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The fraction with smallest denominator in the closed interval [lo, hi].

    Standard continued-fraction walk; used to snap a bisection interval onto
    the exact rational boundary it brackets.
    """
    if lo > hi:
        raise ValueError("empty interval")
    if lo == hi:
        return lo
    if lo <= 0 <= hi:
        return ZERO
    if hi < 0:
        return -simplest_between(-hi, -lo)

    def walk(a: Fraction, b: Fraction) -> Fraction:
        # 0 < a < b
        ia = a.numerator // a.denominator
        if a.denominator == 1:
            return a
        if ia < b.numerator // b.denominator or b.denominator == 1:
            return Fraction(ia + 1)
        frac = walk(1 / (b - ia), 1 / (a - ia))
        return ia + 1 / frac

    return walk(lo, hi)
