"""Riemann zeta values and magnitudes from Euler prime products."""
from .core import ComplexArgument, DomainError, FormulaId, PrecisionContext, PrecisionError, ResourceLimitError
from .engine import ProductEvaluation, evaluate, parallel_reduce, per_prime_factor, ratio_identity_residual, tail_bound
from .oracle import OracleResult, reference_magnitude, reference_zeta
from .primes import PrimeBlock, first_n_primes, prime_blocks
from .rational import (
    CoefficientResult,
    alt_coefficient,
    appendix_a_table,
    bernoulli,
    half_integer_coefficient,
    main_coefficient,
    zeta_even_rational,
)

__version__ = "0.1.0"
