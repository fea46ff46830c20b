"""The prime product formulas: per-prime factors, leading coefficients, tail terms.

Each formula is a leading coefficient times a product over primes.  Factors
are computed in the *current* gmpy2 context; callers choose the precision.
The magnitude formulas (MAGNITUDE_MAIN, MAGNITUDE_COSH) produce |zeta|^2 and
the engine takes the square root of coefficient * product at the end; every
other formula carries its fractional exponent inside each factor.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import gmpy2
from gmpy2 import cos, cosh, log, mpfr, mpq, rec_sqrt, root, sqrt

from . import rational
from .core import ComplexArgument, DomainError, FormulaId, PrecisionContext

F = FormulaId
HALF = Fraction(3, 2)
MAX_PHASE = 2**30  # largest |t ln p| accepted


@dataclass(frozen=True)
class TailTerm:
    """One logarithmic tail contribution: weight * sum_{p > P} y/(1-y) with y <= amplitude * p^(-scale*sigma)."""

    weight: Fraction
    amplitude: int
    sigma_scale: int = 1


@dataclass(frozen=True)
class FormulaSpec:
    formula: FormulaId
    printed: str
    tail: tuple[TailTerm, ...]
    squared: bool = False  # the product gives |zeta|^2
    integer_sigma: bool = False
    fixed_sigma: Fraction | None = None
    accepts_t: bool = False


_SQRT_TAIL = (TailTerm(Fraction(1, 2), 2),)
_HALF_TAIL = (TailTerm(Fraction(1, 2), 2), TailTerm(Fraction(1, 4), 2, 2))

SPECS: dict[FormulaId, FormulaSpec] = {
    F.EULER_PRODUCT: FormulaSpec(
        F.EULER_PRODUCT,
        "|zeta(s)| = prod |1 - p^-s|^-1",
        (TailTerm(Fraction(1), 1),),
        accepts_t=True,
    ),
    F.RATIO_IDENTITY: FormulaSpec(
        F.RATIO_IDENTITY,
        "zeta(2s)/zeta(s) = prod (1 + p^-s)^-1",
        (TailTerm(Fraction(1), 1),),
    ),
    F.MAGNITUDE_MAIN: FormulaSpec(
        F.MAGNITUDE_MAIN,
        "|zeta(s+it)|^2 = zeta(4s)/zeta(2s) prod (1 - 2 cos(t ln p)/(p^s + p^-s))^-1",
        _SQRT_TAIL,
        squared=True,
        accepts_t=True,
    ),
    F.MAGNITUDE_COSH: FormulaSpec(
        F.MAGNITUDE_COSH,
        "|zeta(s+it)|^2 = zeta(4s)/zeta(2s) prod (1 - cos(t ln p)/cosh(s ln p))^-1",
        _SQRT_TAIL,
        squared=True,
        accepts_t=True,
    ),
    F.INTEGER_SQRT: FormulaSpec(
        F.INTEGER_SQRT,
        "zeta(k) = pi^k sqrt(zeta(4k)/zeta(2k)/pi^2k) prod (1 - 2 cos(t ln p)/(p^k + p^-k))^-1/2",
        _SQRT_TAIL,
        integer_sigma=True,
        accepts_t=True,
    ),
    F.INTEGER_RATIONALIZED: FormulaSpec(
        F.INTEGER_RATIONALIZED,
        "zeta(k) = pi^k sqrt(zeta(4k)/zeta(2k)/pi^2k) prod sqrt(p^2k + 1)/(p^k - 1)",
        _SQRT_TAIL,
        integer_sigma=True,
    ),
    F.ALT_PRODUCT: FormulaSpec(
        F.ALT_PRODUCT,
        "zeta(k) = pi^k sqrt(zeta(2k)/pi^2k) prod ((p^k + 1)/(p^k - 1))^1/2",
        _SQRT_TAIL,
        integer_sigma=True,
    ),
    F.HALF_INTEGER_MAIN: FormulaSpec(
        F.HALF_INTEGER_MAIN,
        "zeta(3/2) = pi^3/2 (675675/617080275)^1/4 prod (1 - 2/(p^3/2 + p^-3/2))^-1/2 (1 - 2/(p^3 + p^-3))^1/4",
        _HALF_TAIL,
        fixed_sigma=HALF,
    ),
    F.HALF_INTEGER_ALT: FormulaSpec(
        F.HALF_INTEGER_ALT,
        "zeta(3/2) = pi^3/2 945^-1/4 prod ((p^3/2 + 1)/(p^3/2 - 1))^1/2 ((p^3 + 1)/(p^3 - 1))^1/4",
        _HALF_TAIL,
        fixed_sigma=HALF,
    ),
}


def validate(formula: FormulaId, argument: ComplexArgument) -> None:
    spec = SPECS[formula]
    if argument.sigma <= 1:
        raise DomainError(f"{formula.value}: sigma must exceed 1, got {argument.sigma}")
    if spec.integer_sigma and argument.integer_sigma is None:
        raise DomainError(f"{formula.value}: sigma must be an integer >= 2, got {argument.sigma}")
    if spec.fixed_sigma is not None and argument.sigma != spec.fixed_sigma:
        raise DomainError(f"{formula.value}: defined only at sigma = {spec.fixed_sigma}")
    if not spec.accepts_t and argument.t != 0:
        raise DomainError(f"{formula.value}: real argument only (t = 0)")


def check_phase(argument: ComplexArgument, last_prime: int) -> None:
    if argument.t and abs(float(argument.t)) * gmpy2.log(last_prime) > MAX_PHASE:
        raise DomainError(f"|t ln p| exceeds 2^30 at p = {last_prime}; no wide-range argument reduction")


def _q(x: Fraction, bits: int) -> mpfr:
    return mpfr(mpq(x.numerator, x.denominator), bits)


class PrimeFactor:
    """Callable p -> factor, using the gmpy2 context active at call time.

    ``precision`` is the precision the constants were built at; the reducer
    evaluates factors in a context of that precision.
    """

    def __init__(self, formula: FormulaId, argument: ComplexArgument, precision: int):
        validate(formula, argument)
        self.formula = formula
        self.argument = argument
        self.precision = precision
        self.k = argument.integer_sigma
        self.sigma = _q(argument.sigma, precision)
        self.t = _q(argument.t, precision)
        self._fn: Callable[[int], mpfr] = getattr(self, "_" + formula.name.lower())

    def __call__(self, p: int) -> mpfr:
        return self._fn(p)

    def _pow(self, p: int) -> mpfr:
        return mpfr(p**self.k) if self.k is not None else mpfr(p) ** self.sigma

    def _cos(self, p: int) -> mpfr:
        return cos(self.t * log(p))

    def _euler_product(self, p):
        if self.t:
            u = 1 / self._pow(p)
            return rec_sqrt(1 - 2 * u * self._cos(p) + u * u)
        if self.k is not None:
            x = p**self.k
            return mpfr(mpq(x, x - 1))
        return 1 / (1 - 1 / self._pow(p))

    def _ratio_identity(self, p):
        if self.k is not None:
            x = p**self.k
            return mpfr(mpq(x, x + 1))
        return 1 / (1 + 1 / self._pow(p))

    def _magnitude_main(self, p):
        x = self._pow(p)
        y = 2 / (x + 1 / x)
        if self.t:
            y *= self._cos(p)
        return 1 / (1 - y)

    def _magnitude_cosh(self, p):
        lp = log(p)
        return 1 / (1 - cos(self.t * lp) / cosh(self.sigma * lp))

    def _integer_sqrt(self, p):
        x = mpfr(p**self.k)
        y = 2 / (x + 1 / x)
        if self.t:
            y *= self._cos(p)
        return rec_sqrt(1 - y)

    def _integer_rationalized(self, p):
        x = p**self.k
        return sqrt(mpfr(x * x + 1)) / (x - 1)

    def _alt_product(self, p):
        x = p**self.k
        return sqrt(mpfr(mpq(x + 1, x - 1)))

    def _half_integer_main(self, p):
        x = sqrt(mpfr(p**3))
        y = p**3
        # 1 - 2/(y + 1/y) == (y - 1)^2 / (y^2 + 1) exactly
        return rec_sqrt(1 - 2 / (x + 1 / x)) * root(mpfr(mpq((y - 1) ** 2, y * y + 1)), 4)

    def _half_integer_alt(self, p):
        x = sqrt(mpfr(p**3))
        y = p**3
        return sqrt((x + 1) / (x - 1)) * root(mpfr(mpq(y + 1, y - 1)), 4)


def _zeta_real(s: Fraction, ctx: PrecisionContext, bits: int) -> tuple[mpfr, mpfr]:
    """zeta(s) for real s > 1 at ``bits``, with a relative error bound.

    Even integers use the exact rational closed form; anything else comes from
    the reference oracle.
    """
    if s.denominator == 1 and s.numerator % 2 == 0:
        r = rational.zeta_even_rational(s.numerator // 2)
        with gmpy2.context(gmpy2.get_context(), precision=bits):
            return gmpy2.const_pi() ** s.numerator * _q(r, bits), mpfr(0)
    from .oracle import reference_zeta

    res = reference_zeta(ComplexArgument(s), ctx)
    value = mpmath_to_mpfr(res.value, bits)
    with gmpy2.context(gmpy2.get_context(), precision=64):
        rel = mpmath_to_mpfr(res.error_bound, 64) / (value - mpmath_to_mpfr(res.error_bound, 64))
    return value, rel


def mpmath_to_mpfr(x, bits: int) -> mpfr:
    man, exp = x.man_exp
    return mpfr(gmpy2.mpz(man) * mpq(2) ** exp, bits) if exp < 0 else mpfr(gmpy2.mpz(man) << exp, bits)


def coefficient(formula: FormulaId, argument: ComplexArgument, ctx: PrecisionContext, bits: int) -> tuple[mpfr, mpfr]:
    """Leading coefficient (squared for magnitude forms) and its relative error bound.

    Exact-rational coefficients carry only rounding, which the engine budgets
    separately, so their relative error here is zero.
    """
    validate(formula, argument)
    zero = mpfr(0)
    if formula in (F.EULER_PRODUCT, F.RATIO_IDENTITY):
        return mpfr(1, bits), zero
    if formula in (F.MAGNITUDE_MAIN, F.MAGNITUDE_COSH):
        k = argument.integer_sigma
        if k is not None:
            c = rational.main_coefficient(k)
            with gmpy2.context(gmpy2.get_context(), precision=bits):
                return gmpy2.const_pi() ** (2 * k) * _q(c.radicand, bits), zero
        num, e_num = _zeta_real(4 * argument.sigma, ctx, bits)
        den, e_den = _zeta_real(2 * argument.sigma, ctx, bits)
        with gmpy2.context(gmpy2.get_context(), precision=bits):
            return num / den, e_num + e_den
    if formula in (F.INTEGER_SQRT, F.INTEGER_RATIONALIZED):
        c = rational.main_coefficient(argument.integer_sigma)
    elif formula is F.ALT_PRODUCT:
        c = rational.alt_coefficient(argument.integer_sigma)
    elif formula is F.HALF_INTEGER_MAIN:
        c = rational.half_integer_coefficient()
    else:
        c = rational.half_integer_alt_coefficient()
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        pi = gmpy2.const_pi()
        pi_part = pi ** int(c.pi_power) if c.pi_power.denominator == 1 else pi ** _q(c.pi_power, bits)
        return pi_part * root(_q(c.radicand, bits), c.root_index), zero
