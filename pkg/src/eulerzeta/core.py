"""Shared value types and exceptions."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RationalLike = Union[int, str, Fraction]

MIN_GUARD_BITS = 32
DEFAULT_GUARD_BITS = 64


class DomainError(ValueError):
    """Argument outside the region where a formula is defined (e.g. sigma <= 1)."""


class PrecisionError(ArithmeticError):
    """The requested accuracy cannot be certified with the given resources.

    ``evaluation`` carries the uncertified result when one was produced.
    """

    def __init__(self, message: str, evaluation=None):
        super().__init__(message)
        self.evaluation = evaluation


class ResourceLimitError(ValueError):
    pass


class FormulaId(enum.Enum):
    EULER_PRODUCT = "euler"
    RATIO_IDENTITY = "ratio-identity"
    MAGNITUDE_MAIN = "magnitude-main"
    MAGNITUDE_COSH = "magnitude-cosh"
    INTEGER_SQRT = "integer-sqrt"
    INTEGER_RATIONALIZED = "integer-rationalized"
    ALT_PRODUCT = "alt-product"
    HALF_INTEGER_MAIN = "half-integer-main"
    HALF_INTEGER_ALT = "half-integer-alt"

    @classmethod
    def parse(cls, text: str) -> "FormulaId":
        key = text.strip().lower().replace("_", "-")
        for member in cls:
            if member.value == key:
                return member
        raise ValueError(f"unknown formula {text!r}; choose from {', '.join(m.value for m in cls)}")


def to_fraction(x: RationalLike) -> Fraction:
    """Exact conversion; decimal strings such as "1.5" and ratios such as "3/2" both work."""
    if isinstance(x, float):
        raise TypeError("pass floats as strings to keep them exact")
    return Fraction(x)


@dataclass(frozen=True)
class ComplexArgument:
    """s = sigma + i t, both stored exactly."""

    sigma: Fraction
    t: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "sigma", to_fraction(self.sigma))
        object.__setattr__(self, "t", to_fraction(self.t))

    @property
    def is_real(self) -> bool:
        return self.t == 0

    @property
    def integer_sigma(self) -> int | None:
        return self.sigma.numerator if self.sigma.denominator == 1 else None

    def __str__(self) -> str:
        s = _fmt(self.sigma)
        if self.t == 0:
            return s
        sign = "+" if self.t > 0 else "-"
        return f"{s}{sign}{_fmt(abs(self.t))}i"


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision (mantissa bits) and target accuracy; round-to-nearest throughout."""

    target_decimal_digits: int
    working_precision_bits: int

    rounding = "nearest"

    def __post_init__(self) -> None:
        if self.target_decimal_digits < 1:
            raise ValueError("target_decimal_digits must be positive")
        floor_bits = self.digit_bits(self.target_decimal_digits) + MIN_GUARD_BITS
        if self.working_precision_bits < floor_bits:
            raise ValueError(
                f"{self.working_precision_bits} bits is below the {floor_bits}-bit minimum "
                f"for {self.target_decimal_digits} digits"
            )

    @staticmethod
    def digit_bits(digits: int) -> int:
        return math.ceil(digits * math.log2(10))

    @classmethod
    def for_digits(cls, digits: int, guard_bits: int = DEFAULT_GUARD_BITS) -> "PrecisionContext":
        return cls(digits, cls.digit_bits(digits) + guard_bits)

    @property
    def guard_bits(self) -> int:
        return self.working_precision_bits - self.digit_bits(self.target_decimal_digits)
