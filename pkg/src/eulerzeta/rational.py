"""Exact rational arithmetic: Bernoulli numbers and the closed-form coefficients
that multiply powers of pi in the integer-order prime product formulas.

Everything here is exact.  ``fractions.Fraction`` is the rational type; it is
always stored in lowest terms with a positive denominator, and zero is 0/1.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .core import FormulaId

BigRational = Fraction

__all__ = [
    "BigRational",
    "CoefficientResult",
    "bernoulli",
    "factorial",
    "zeta_even_rational",
    "main_coefficient",
    "alt_coefficient",
    "half_integer_coefficient",
    "half_integer_alt_coefficient",
    "appendix_a_table",
    "rational_str",
]


def rational_str(q: Fraction) -> str:
    """Render as ``"num/den"``; the denominator is always printed."""
    return f"{q.numerator}/{q.denominator}"


@lru_cache(maxsize=None)
def factorial(n: int) -> int:
    return math.factorial(n)


class _BernoulliTable:
    """Akiyama-Tanigawa state kept between calls so the table only ever grows.

    The working row ``_row`` is exactly what the algorithm needs to continue
    from index ``len(_values)``.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._row: list[Fraction] = []
        self._values: list[Fraction] = []

    def get(self, n: int) -> Fraction:
        values = self._values
        if n < len(values):
            return values[n]
        with self._lock:
            row = self._row
            for m in range(len(self._values), n + 1):
                row.append(Fraction(1, m + 1))
                for j in range(m, 0, -1):
                    row[j - 1] = j * (row[j - 1] - row[j])
                # the algorithm yields B_1 = +1/2
                self._values.append(-row[0] if m == 1 else row[0])
            return self._values[n]


_BERNOULLI = _BernoulliTable()


def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with the convention B_1 = -1/2.  Memoized."""
    if n < 0:
        raise ValueError(f"bernoulli index must be >= 0, got {n}")
    if n > 1 and n % 2:
        return Fraction(0)
    return _BERNOULLI.get(n)


def zeta_even_rational(k: int) -> Fraction:
    """The rational r with zeta(2k) = r * pi**(2k)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    sign = 1 if k % 2 else -1
    return sign * bernoulli(2 * k) * 2 ** (2 * k) / (2 * factorial(2 * k))


@dataclass(frozen=True)
class CoefficientResult:
    """Leading coefficient pi**pi_power * radicand**(1/root_index)."""

    k: Fraction
    pi_power: Fraction
    radicand: Fraction
    formula: FormulaId
    root_index: int = 2

    def __post_init__(self) -> None:
        if self.radicand <= 0:
            raise ArithmeticError(f"non-positive radicand {self.radicand} for k={self.k}")


def _check_order(k: int) -> None:
    if int(k) != k or k < 2:
        raise ValueError(f"integer order k >= 2 required, got {k}")


def main_coefficient(k: int) -> CoefficientResult:
    """Coefficient of the square-root integer formula: zeta(4k)/zeta(2k) / pi**(2k)."""
    _check_order(k)
    radicand = zeta_even_rational(2 * k) / zeta_even_rational(k)
    return CoefficientResult(Fraction(k), Fraction(k), radicand, FormulaId.INTEGER_SQRT)


def alt_coefficient(k: int) -> CoefficientResult:
    """Coefficient of the (p^k+1)/(p^k-1) family.

    The radicand is (-1)^(k+1) B_2k 2^(2k-1) / (2k)!, which is the same number
    as zeta_even_rational(k).
    """
    _check_order(k)
    sign = 1 if k % 2 else -1
    radicand = sign * bernoulli(2 * k) * 2 ** (2 * k - 1) / factorial(2 * k)
    return CoefficientResult(Fraction(k), Fraction(k), radicand, FormulaId.ALT_PRODUCT)


def half_integer_coefficient() -> CoefficientResult:
    """Fourth-root radicand for zeta(3/2) built from zeta(6)/zeta(3).

    Squaring the sigma = 3/2 magnitude identity and substituting the k = 3
    integer formula for zeta(3) leaves (pi^6/945)^2 / (pi^6 * 691/675675) under
    a fourth root, i.e. 675675 / (691 * 945**2) = 675675/617080275.
    """
    radicand = zeta_even_rational(3) ** 2 / main_coefficient(3).radicand
    return CoefficientResult(
        Fraction(3, 2), Fraction(3, 2), radicand, FormulaId.HALF_INTEGER_MAIN, root_index=4
    )


def half_integer_alt_coefficient() -> CoefficientResult:
    """Fourth-root radicand (1/945) for zeta(3/2) in the (p^s+1)/(p^s-1) family."""
    radicand = alt_coefficient(3).radicand
    return CoefficientResult(
        Fraction(3, 2), Fraction(3, 2), radicand, FormulaId.HALF_INTEGER_ALT, root_index=4
    )


def appendix_a_table(max_order: int = 11) -> list[CoefficientResult]:
    return [main_coefficient(k) for k in range(2, max_order + 1)]
