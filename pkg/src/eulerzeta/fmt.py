"""Decimal rendering of mpfr values with explicit rounding conventions."""
from __future__ import annotations

import decimal
from decimal import Decimal

import gmpy2
from gmpy2 import mpfr

HALF_EVEN = "round-half-even"
TRUNCATE = "truncate"
CONVENTIONS = (HALF_EVEN, TRUNCATE)

_MODES = {HALF_EVEN: decimal.ROUND_HALF_EVEN, TRUNCATE: decimal.ROUND_DOWN, "up": decimal.ROUND_UP}


def to_decimal(x: mpfr, digits: int, convention: str = HALF_EVEN) -> Decimal:
    """x rounded to ``digits`` significant digits, from its exact binary value."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    num, den = x.as_integer_ratio()
    ctx = decimal.Context(prec=digits, rounding=_MODES[convention], Emax=10**6, Emin=-(10**6))
    d = ctx.divide(Decimal(int(num)), Decimal(int(den)))
    if d == 0:
        return d
    # exact quotients come back short; pad to the full digit count
    quantum = Decimal(1).scaleb(d.adjusted() - digits + 1)
    return d.quantize(quantum, context=ctx)


def significant(x: mpfr, digits: int, convention: str = HALF_EVEN) -> str:
    d = to_decimal(x, digits, convention)
    if d.adjusted() >= -7 and d.as_tuple().exponent <= 0:
        return format(d, "f")
    return format(d, "E").replace("E", "e")


def bound(x: mpfr, digits: int = 3) -> str:
    """An error bound, rounded away from zero so it never shrinks."""
    if gmpy2.is_infinite(x):
        return "inf"
    if x == 0:
        return "0"
    d = to_decimal(x, digits, "up")
    return format(d, "E").replace("E", "e")


def ulp(d: Decimal) -> Decimal:
    """One unit in the last printed place of ``d``."""
    return Decimal(1).scaleb(d.as_tuple().exponent)
