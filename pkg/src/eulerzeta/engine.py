"""Evaluation of the prime product formulas with truncation and rounding bounds.

Rounding model.  Each factor is evaluated with ``FACTOR_GUARD_BITS`` extra
bits (MPFR functions are correctly rounded), so its relative error after the
multiply into the working-precision accumulator is at most 2^(1-w).  The
reported bound budgets 4 times that per factor, which also covers the handful
of roundings in the leading coefficient and the final square root.

Truncation model.  For p > P every omitted factor f satisfies
|ln f| <= weight * y/(1-y) with y <= a p^-sigma'.  Summing over all integers
n > P instead of primes and comparing with an integral gives
B = sum weight * a P^(1-sigma') / ((sigma'-1)(1 - a P^-sigma')), and the
relative error of the truncated product is at most e^B - 1 <= B e^B.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import gmpy2
from gmpy2 import mpfr, mpq

from . import formulas
from .core import ComplexArgument, FormulaId, PrecisionContext, PrecisionError
from .formulas import SPECS, PrimeFactor
from .primes import DEFAULT_BLOCK_SIZE, PrimeBlock, iter_prime_blocks, prime_blocks

log = logging.getLogger(__name__)

FACTOR_GUARD_BITS = 64
ROUNDING_SAFETY = 4
BOUND_BITS = 64
AUTO_MAX_PRIMES = 2**22
INF = mpfr("inf")


@dataclass(frozen=True)
class ProductEvaluation:
    formula: FormulaId
    argument: ComplexArgument
    primes_used: int
    last_prime: int
    value: mpfr
    truncation_bound: mpfr
    rounding_bound: mpfr
    certified_digits: int
    precision_bits: int
    product: mpfr  # the bare prime product, without the leading coefficient

    @property
    def total_bound(self) -> mpfr:
        with gmpy2.context(gmpy2.get_context(), precision=BOUND_BITS, round=gmpy2.RoundUp):
            return self.truncation_bound + self.rounding_bound


def certified_digits(relative_bound: mpfr) -> int:
    """Largest d with relative_bound <= 10^-d, found by exact rational comparison."""
    if not gmpy2.is_finite(relative_bound) or relative_bound >= 1:
        return 0
    if relative_bound <= 0:
        raise ValueError("a relative bound must be positive")
    q = mpq(relative_bound)
    d = max(0, int(-math.log10(float(relative_bound))))
    while d > 0 and mpq(1, 10**d) < q:
        d -= 1
    while mpq(1, 10 ** (d + 1)) >= q:
        d += 1
    return d


def tail_bound(formula: FormulaId, argument: ComplexArgument, last_prime: int) -> mpfr:
    """Bound on |truncated/full - 1| when the product stops at ``last_prime``.

    Returns +inf when the bound would reach 1.
    """
    if last_prime < 2:
        raise ValueError("last_prime must be >= 2")
    formulas.validate(formula, argument)
    with gmpy2.context(gmpy2.get_context(), precision=BOUND_BITS):
        sigma = mpfr(mpq(argument.sigma.numerator, argument.sigma.denominator))
        big_p = mpfr(last_prime)
        b = mpfr(0)
        for term in SPECS[formula].tail:
            s = term.sigma_scale * sigma
            y_max = term.amplitude * big_p ** (-s)
            b += (
                mpfr(mpq(term.weight.numerator, term.weight.denominator))
                * term.amplitude
                * big_p ** (1 - s)
                / ((s - 1) * (1 - y_max))
            )
        # absorb the rounding of this 64-bit computation
        bound = b * gmpy2.exp(b) * (1 + mpfr(2) ** -40)
    return INF if bound >= 1 else bound


def _block_product(block: PrimeBlock, factor_fn: Callable[[int], mpfr], work_bits: int, factor_bits: int) -> mpfr:
    acc_ctx = gmpy2.context(precision=work_bits)
    acc = mpfr(1)
    with gmpy2.context(gmpy2.get_context(), precision=factor_bits):
        for p in block.primes.tolist():
            acc = acc_ctx.mul(acc, factor_fn(p))
    return acc


def parallel_reduce(
    blocks: Sequence[PrimeBlock],
    factor_fn: Callable[[int], mpfr],
    ctx: PrecisionContext,
    workers: int = 1,
) -> mpfr:
    """Product of factor_fn(p) over all primes in ``blocks``.

    Block products may run on any worker; they are always combined left to
    right in block order, so the result depends only on the blocks and the
    precision, never on ``workers``.
    """
    work_bits = ctx.working_precision_bits
    factor_bits = getattr(factor_fn, "precision", work_bits + FACTOR_GUARD_BITS)
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(lambda b: _block_product(b, factor_fn, work_bits, factor_bits), blocks))
    else:
        partials = [_block_product(b, factor_fn, work_bits, factor_bits) for b in blocks]
    acc_ctx = gmpy2.context(precision=work_bits)
    acc = mpfr(1)
    for part in partials:
        acc = acc_ctx.mul(acc, part)
    return acc


def per_prime_factor(formula: FormulaId, argument: ComplexArgument, p: int, ctx: PrecisionContext) -> mpfr:
    """A single factor of the product, rounded to working precision."""
    factor = PrimeFactor(formula, argument, ctx.working_precision_bits + FACTOR_GUARD_BITS)
    formulas.check_phase(argument, p)
    with gmpy2.context(gmpy2.get_context(), precision=factor.precision):
        f = factor(p)
    return mpfr(f, ctx.working_precision_bits)


def _auto_blocks(
    formula: FormulaId, argument: ComplexArgument, ctx: PrecisionContext, block_size: int, max_primes: int
) -> list[PrimeBlock]:
    threshold = mpfr(mpq(1, 10 ** (ctx.target_decimal_digits + 1)), BOUND_BITS)
    chosen: list[PrimeBlock] = []
    for block in iter_prime_blocks(block_size, max_primes):
        chosen.append(block)
        if tail_bound(formula, argument, block.last_prime) < threshold:
            return chosen
    log.warning(
        "auto mode stopped at the %d-prime cap before the tail bound reached 1e-%d",
        max_primes,
        ctx.target_decimal_digits + 1,
    )
    return chosen


def evaluate(
    formula: FormulaId,
    argument: ComplexArgument,
    n_primes: int | None,
    ctx: PrecisionContext,
    *,
    block_size: int = DEFAULT_BLOCK_SIZE,
    workers: int = 1,
    max_primes: int = AUTO_MAX_PRIMES,
    strict: bool = True,
) -> ProductEvaluation:
    """Evaluate ``formula`` at ``argument`` over the first ``n_primes`` primes.

    ``n_primes=None`` selects auto mode: whole blocks are added until the tail
    bound drops below 10^-(digits+1) or ``max_primes`` is reached.  With
    ``strict`` a result with no certified digits raises PrecisionError (the
    evaluation is attached to the exception).
    """
    formulas.validate(formula, argument)
    if n_primes is None:
        blocks = _auto_blocks(formula, argument, ctx, block_size, max_primes)
    else:
        blocks = prime_blocks(n_primes, block_size)
    last_prime = blocks[-1].last_prime
    primes_used = sum(len(b) for b in blocks)
    formulas.check_phase(argument, last_prime)

    work = ctx.working_precision_bits
    factor_bits = work + FACTOR_GUARD_BITS
    factor = PrimeFactor(formula, argument, factor_bits)
    product = parallel_reduce(blocks, factor, ctx, workers=workers)
    coef, coef_err = formulas.coefficient(formula, argument, ctx, factor_bits)

    with gmpy2.context(gmpy2.get_context(), precision=work):
        value = coef * product
        if SPECS[formula].squared:
            value = gmpy2.sqrt(value)
    with gmpy2.context(gmpy2.get_context(), precision=BOUND_BITS, round=gmpy2.RoundUp):
        rounding = ROUNDING_SAFETY * primes_used * mpfr(2) ** (1 - work) + coef_err
    trunc = tail_bound(formula, argument, last_prime)
    with gmpy2.context(gmpy2.get_context(), precision=BOUND_BITS, round=gmpy2.RoundUp):
        digits = certified_digits(trunc + rounding)

    result = ProductEvaluation(
        formula, argument, primes_used, last_prime, value, trunc, rounding, digits, work, product
    )
    if strict and digits < 1:
        raise PrecisionError(
            f"{formula.value} at s={argument} with {primes_used} primes certifies no digits "
            f"(truncation bound {trunc}); raise the prime count or precision",
            result,
        )
    return result


def ratio_identity_residual(sigma: Fraction | int | str, n_primes: int, ctx: PrecisionContext) -> mpfr:
    """|zeta(2 sigma)/zeta(sigma) - prod_{p <= p_n} (1 + p^-sigma)^-1|, zeta from the oracle."""
    from .oracle import reference_zeta

    argument = ComplexArgument(sigma)
    rhs = evaluate(FormulaId.RATIO_IDENTITY, argument, n_primes, ctx, strict=False).value
    work = ctx.working_precision_bits + FACTOR_GUARD_BITS
    num = formulas.mpmath_to_mpfr(reference_zeta(ComplexArgument(2 * argument.sigma), ctx).value, work)
    den = formulas.mpmath_to_mpfr(reference_zeta(argument, ctx).value, work)
    with gmpy2.context(gmpy2.get_context(), precision=work):
        return abs(num / den - rhs)


def oracle_ratio_error(sigma: Fraction | int | str, ctx: PrecisionContext) -> mpfr:
    """Absolute error bound on the oracle's zeta(2 sigma)/zeta(sigma)."""
    from .oracle import reference_zeta

    argument = ComplexArgument(sigma)
    a = reference_zeta(ComplexArgument(2 * argument.sigma), ctx)
    b = reference_zeta(argument, ctx)
    with gmpy2.context(gmpy2.get_context(), precision=BOUND_BITS, round=gmpy2.RoundUp):
        ea = formulas.mpmath_to_mpfr(a.error_bound, BOUND_BITS)
        eb = formulas.mpmath_to_mpfr(b.error_bound, BOUND_BITS)
        va = formulas.mpmath_to_mpfr(a.value, BOUND_BITS)
        vb = formulas.mpmath_to_mpfr(b.value, BOUND_BITS)
        return (ea + va * eb / (vb - eb)) / (vb - eb)

