"""Cross-formula, oracle-agreement and determinism checks run by ``eulerzeta verify``."""
from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import gmpy2
from gmpy2 import mpfr, mpq

from . import rational
from .core import ComplexArgument, FormulaId, PrecisionContext
from .engine import ProductEvaluation, evaluate, oracle_ratio_error, ratio_identity_residual
from .formulas import mpmath_to_mpfr
from .oracle import reference_magnitude, reference_zeta
from .primes import first_n_primes

F = FormulaId
LEVELS = ("quick", "full")


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


@dataclass(frozen=True)
class Level:
    cross_family_primes: int
    ratio_primes: int
    oracle_primes: int
    determinism_primes: int


_LEVELS = {
    "quick": Level(cross_family_primes=10_000, ratio_primes=10_000, oracle_primes=1_000, determinism_primes=20_000),
    "full": Level(cross_family_primes=100_000, ratio_primes=100_000, oracle_primes=20_000, determinism_primes=100_000),
}

CTX = PrecisionContext.for_digits(15)


def _rel_total(e: ProductEvaluation) -> mpfr:
    return e.truncation_bound + e.rounding_bound


def _within(a: mpfr, b: mpfr, rel: mpfr, extra: mpfr = mpfr(0)) -> tuple[bool, mpfr]:
    with gmpy2.context(gmpy2.get_context(), precision=CTX.working_precision_bits + 64):
        diff = abs(a - b)
        allowed = rel * max(a, b) * (1 + rel) + extra
        return bool(diff <= allowed), diff


def check_rationalized_equivalence(level: Level) -> CheckResult:
    worst = mpfr(0)
    for n in (10, 1000):
        for k in range(2, 12):
            a = evaluate(F.INTEGER_SQRT, ComplexArgument(k), n, CTX, strict=False)
            b = evaluate(F.INTEGER_RATIONALIZED, ComplexArgument(k), n, CTX, strict=False)
            ok, diff = _within(a.value, b.value, a.rounding_bound + b.rounding_bound)
            worst = max(worst, diff)
            if not ok:
                return CheckResult("integer-rationalized == integer-sqrt, k=2..11", False, f"k={k} n={n} diff={diff}")
    return CheckResult("integer-rationalized == integer-sqrt, k=2..11", True, f"max diff {float(worst):.2e}")


def check_magnitude_reduces_to_integer(level: Level) -> CheckResult:
    name = "magnitude-main at t=0 squared == integer-sqrt squared, sigma in {2,3,4}"
    for sigma in (2, 3, 4):
        for n in (10, 100):
            a = evaluate(F.MAGNITUDE_MAIN, ComplexArgument(sigma, 0), n, CTX, strict=False)
            b = evaluate(F.INTEGER_SQRT, ComplexArgument(sigma), n, CTX, strict=False)
            with gmpy2.context(gmpy2.get_context(), precision=CTX.working_precision_bits + 64):
                a2, b2 = a.value**2, b.value**2
            ok, diff = _within(a2, b2, 2 * (a.rounding_bound + b.rounding_bound))
            if not ok:
                return CheckResult(name, False, f"sigma={sigma} n={n} diff={diff}")
    return CheckResult(name, True, "6 cases")


def check_cross_family(level: Level) -> CheckResult:
    n = level.cross_family_primes
    name = f"integer-sqrt vs alt-product, k=2..11, {n} primes"
    for k in range(2, 12):
        a = evaluate(F.INTEGER_SQRT, ComplexArgument(k), n, CTX, strict=False)
        b = evaluate(F.ALT_PRODUCT, ComplexArgument(k), n, CTX, strict=False)
        ok, diff = _within(a.value, b.value, _rel_total(a) + _rel_total(b))
        if not ok:
            return CheckResult(name, False, f"k={k} diff={diff}")
    return CheckResult(name, True, "10 orders agree within truncation + rounding")


def check_ratio_identity(level: Level) -> CheckResult:
    n = level.ratio_primes
    name = f"ratio identity residual below tail bound, sigma in {{1.5, 2, 3}}, {n} primes"
    details = []
    for sigma in (Fraction(3, 2), Fraction(2), Fraction(3)):
        e = evaluate(F.RATIO_IDENTITY, ComplexArgument(sigma), n, CTX, strict=False)
        residual = ratio_identity_residual(sigma, n, CTX)
        allowed = e.value * _rel_total(e) * (1 + _rel_total(e)) + oracle_ratio_error(sigma, CTX)
        details.append(f"sigma={sigma}: {float(residual):.2e} <= {float(allowed):.2e}")
        if not residual <= allowed:
            return CheckResult(name, False, "; ".join(details))
    return CheckResult(name, True, "; ".join(details))


def check_von_staudt_clausen(level: Level) -> CheckResult:
    name = "Bernoulli denominators (von Staudt-Clausen), 2n <= 80"
    primes = first_n_primes(30).tolist()
    for n in range(1, 41):
        expected = 1
        for p in primes:
            if (2 * n) % (p - 1) == 0:
                expected *= p
        if rational.bernoulli(2 * n).denominator != expected:
            return CheckResult(name, False, f"B_{2 * n}")
    return CheckResult(name, True, "40 even indices")


def check_oracle_even_zeta(level: Level) -> CheckResult:
    name = "oracle matches pi^2k rational closed form, 2k <= 20"
    bits = CTX.working_precision_bits + 64
    for k in range(1, 11):
        r = reference_zeta(ComplexArgument(2 * k), CTX)
        q = rational.zeta_even_rational(k)
        with gmpy2.context(gmpy2.get_context(), precision=bits):
            exact = gmpy2.const_pi() ** (2 * k) * mpfr(mpq(q.numerator, q.denominator))
            diff = abs(mpmath_to_mpfr(r.value, bits) - exact)
            allowed = mpmath_to_mpfr(r.error_bound, bits) + exact * mpfr(2) ** (8 - CTX.working_precision_bits)
        if not diff <= allowed:
            return CheckResult(name, False, f"zeta({2 * k}) diff={diff}")
    return CheckResult(name, True, "10 even arguments")


def check_determinism(level: Level) -> CheckResult:
    n = level.determinism_primes
    name = f"parallel reduction bit-identical across 1, 2, 8 threads ({n} primes)"
    cases = [(F.INTEGER_SQRT, ComplexArgument(2)), (F.MAGNITUDE_COSH, ComplexArgument(3, 1))]
    for formula, arg in cases:
        values = [
            evaluate(formula, arg, n, CTX, block_size=1024, workers=w, strict=False).value.as_integer_ratio()
            for w in (1, 2, 8)
        ]
        if len(set(values)) != 1:
            return CheckResult(name, False, f"{formula.value} differs across thread counts")
    return CheckResult(name, True, "2 formulas")


ORACLE_CASES: list[tuple[FormulaId, ComplexArgument]] = [
    (F.EULER_PRODUCT, ComplexArgument(2)),
    (F.EULER_PRODUCT, ComplexArgument(2, 1)),
    (F.RATIO_IDENTITY, ComplexArgument(2)),
    (F.MAGNITUDE_MAIN, ComplexArgument(2, 1)),
    (F.MAGNITUDE_COSH, ComplexArgument(3, 1)),
    (F.MAGNITUDE_COSH, ComplexArgument(Fraction(3, 2), 1)),
    (F.INTEGER_SQRT, ComplexArgument(3)),
    (F.INTEGER_SQRT, ComplexArgument(2, 1)),
    (F.INTEGER_RATIONALIZED, ComplexArgument(4)),
    (F.ALT_PRODUCT, ComplexArgument(5)),
    (F.HALF_INTEGER_MAIN, ComplexArgument(Fraction(3, 2))),
    (F.HALF_INTEGER_ALT, ComplexArgument(Fraction(3, 2))),
]


def oracle_target(formula: FormulaId, argument: ComplexArgument, ctx: PrecisionContext) -> tuple[mpfr, mpfr]:
    """Reference value for what ``formula`` converges to, with its absolute error bound."""
    bits = ctx.working_precision_bits + 64
    if formula is F.RATIO_IDENTITY:
        num = reference_zeta(ComplexArgument(2 * argument.sigma), ctx)
        den = reference_zeta(argument, ctx)
        with gmpy2.context(gmpy2.get_context(), precision=bits):
            value = mpmath_to_mpfr(num.value, bits) / mpmath_to_mpfr(den.value, bits)
        return value, oracle_ratio_error(argument.sigma, ctx)
    r = reference_magnitude(argument, ctx)
    return mpmath_to_mpfr(r.value, bits), mpmath_to_mpfr(r.error_bound, bits)


def check_oracle_agreement(level: Level) -> CheckResult:
    n = level.oracle_primes
    name = f"every formula agrees with the oracle within its bounds ({n} primes)"
    for formula, arg in ORACLE_CASES:
        e = evaluate(formula, arg, n, CTX, strict=False)
        ref, ref_err = oracle_target(formula, arg, CTX)
        ok, diff = _within(e.value, ref, _rel_total(e), ref_err)
        if not ok:
            return CheckResult(name, False, f"{formula.value} at {arg}: diff={diff}")
    return CheckResult(name, True, f"{len(ORACLE_CASES)} cases")


def check_monotone(level: Level) -> CheckResult:
    name = "partial products increase with the prime count (t = 0)"
    for formula in (F.INTEGER_SQRT, F.ALT_PRODUCT, F.EULER_PRODUCT):
        prev = None
        for n in range(1, 41):
            v = evaluate(formula, ComplexArgument(2), n, CTX, strict=False).value
            if prev is not None and not v > prev:
                return CheckResult(name, False, f"{formula.value} n={n}")
            prev = v
    return CheckResult(name, True, "3 formulas, n = 1..40")


CHECKS: list[Callable[[Level], CheckResult]] = [
    check_rationalized_equivalence,
    check_magnitude_reduces_to_integer,
    check_cross_family,
    check_ratio_identity,
    check_von_staudt_clausen,
    check_oracle_even_zeta,
    check_determinism,
    check_oracle_agreement,
    check_monotone,
]


def run(level: str = "quick") -> list[CheckResult]:
    settings = _LEVELS[level]
    results = []
    for check in CHECKS:
        start = time.perf_counter()
        try:
            res = check(settings)
        except Exception as exc:  # a crash is a failed property, not a crashed run
            res = CheckResult(check.__name__, False, f"{type(exc).__name__}: {exc}")
        res.seconds = time.perf_counter() - start
        results.append(res)
    return results
