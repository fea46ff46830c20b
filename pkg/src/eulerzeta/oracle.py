"""Independent reference values of zeta(s), Re(s) > 1.

Uses the alternating eta series with Borwein's Chebyshev-polynomial
acceleration, evaluated in mpmath.  Nothing here touches the prime machinery
or the gmpy2 arithmetic used by the product engine.

    zeta(s) = -1 / (d_n (1 - 2^(1-s))) * sum_{k<n} (-1)^k (d_k - d_n) / (k+1)^s + g_n(s)
    d_k = n * sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!)
    |g_n(s)| <= 3 (1 + 2|t|) exp(pi |t| / 2) / ((3 + sqrt 8)^n |1 - 2^(1-s)|)     (sigma >= 1/2)
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .core import ComplexArgument, DomainError, PrecisionContext, PrecisionError

ORACLE_EXTRA_BITS = 32
SAFETY = 4


@dataclass(frozen=True)
class OracleResult:
    argument: ComplexArgument
    value: object  # mpmath mpf or mpc
    error_bound: object  # mpmath mpf, absolute

    @property
    def real(self):
        return self.value.real if hasattr(self.value, "imag") else self.value


@lru_cache(maxsize=64)
def _borwein_d(n: int) -> tuple[int, ...]:
    """Exact integer weights d_0..d_n."""
    out = []
    acc = 0
    for i in range(n + 1):
        acc += math.factorial(n + i - 1) * 4**i // (math.factorial(n - i) * math.factorial(2 * i))
        out.append(n * acc)
    return tuple(out)


def _mp(bits: int) -> mpmath.MPContext:
    mp = mpmath.MPContext()
    mp.prec = bits
    return mp


def _frac(mp: mpmath.MPContext, q: Fraction):
    return mp.mpf(q.numerator) / q.denominator


def reference_zeta(argument: ComplexArgument, ctx: PrecisionContext) -> OracleResult:
    """zeta(sigma + i t) with an absolute error bound below 10^-(digits+2)."""
    if argument.sigma <= 1:
        raise DomainError(f"reference zeta needs sigma > 1, got {argument.sigma}")
    mp = _mp(ctx.working_precision_bits + ORACLE_EXTRA_BITS)
    sigma = _frac(mp, argument.sigma)
    t = _frac(mp, argument.t)
    s = mp.mpc(sigma, t) if t else sigma

    denom = abs(1 - mp.power(2, 1 - s))
    amplitude = 3 * (1 + 2 * abs(t)) * mp.exp(mp.pi * abs(t) / 2) / denom
    tolerance = mp.mpf(10) ** -(ctx.target_decimal_digits + 2)
    rate = mp.log(3 + mp.sqrt(8))
    n = max(2, int(mp.ceil(mp.log(2 * SAFETY * amplitude / tolerance) / rate)))
    cap = 4 * ctx.target_decimal_digits
    if n > cap:
        raise PrecisionError(
            f"eta acceleration needs {n} terms for {ctx.target_decimal_digits} digits at s={argument}; cap is {cap}"
        )

    d = _borwein_d(n)
    dn = d[n]
    total = mp.zero
    for k in range(n):
        term = mp.mpf(d[k] - dn) * mp.power(k + 1, -s)
        total = total - term if k % 2 else total + term
    value = -total / (dn * (1 - mp.power(2, 1 - s)))

    remainder = amplitude / (3 + mp.sqrt(8)) ** n
    rounding = (n + 16) * (1 + mp.log(n)) * mp.ldexp(1, -mp.prec) * (1 + abs(value)) / denom
    error = SAFETY * (remainder + rounding)
    if not error < tolerance:
        raise PrecisionError(f"oracle error {mpmath.nstr(error, 3)} exceeds {mpmath.nstr(tolerance, 3)}")
    return OracleResult(argument, value, error)


def reference_magnitude(argument: ComplexArgument, ctx: PrecisionContext) -> OracleResult:
    """|zeta(sigma + i t)|; the modulus cannot increase the absolute error."""
    r = reference_zeta(argument, ctx)
    return OracleResult(argument, abs(r.value), r.error_bound)
