"""
Exact integer and rational arithmetic: p-adic valuations, factorization, divisors.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Tuple, Union
import logging

from sympy import isprime, primerange
from sympy.ntheory import perfect_power, pollard_rho

from config.settings import (
    FACTOR_TRIAL_LIMIT, FACTOR_RHO_MAX_STEPS, FACTOR_RHO_RETRIES, FACTOR_SEED
)
from utils.errors import FactorizationBudgetError, PreconditionError

logger = logging.getLogger(__name__)

Rational = Fraction
RationalLike = Union[int, Fraction]


@dataclass(frozen=True)
class FactorBudget:
    """Effort limits for factorize."""
    trial_limit: int = FACTOR_TRIAL_LIMIT
    rho_max_steps: int = FACTOR_RHO_MAX_STEPS
    rho_retries: int = FACTOR_RHO_RETRIES
    seed: int = FACTOR_SEED


DEFAULT_BUDGET = FactorBudget()


@dataclass(frozen=True)
class Factorization:
    """Signed prime factorization; primes strictly increasing."""
    sign: int
    factors: Tuple[Tuple[int, int], ...]

    @property
    def primes(self) -> List[int]:
        return [p for p, _ in self.factors]

    def value(self) -> int:
        """Reconstruct the factored integer."""
        result = self.sign
        for p, e in self.factors:
            result *= p ** e
        return result

    def as_dict(self) -> Dict[int, int]:
        return dict(self.factors)


def to_rational(value: RationalLike) -> Fraction:
    """Coerce int/Fraction/str to a reduced Fraction."""
    return value if isinstance(value, Fraction) else Fraction(value)


def vp_int(n: int, p: int) -> int:
    """Exponent of p in a nonzero integer."""
    if n == 0:
        raise PreconditionError("valuation of 0 is undefined")
    n = abs(n)
    count = 0
    while n % p == 0:
        n //= p
        count += 1
    return count


def vp(q: RationalLike, p: int) -> int:
    """
    p-adic valuation of a nonzero rational.

    Args:
        q: Nonzero rational (int or Fraction)
        p: Prime

    Returns:
        Exponent of p in q; negative when p divides the denominator
    """
    q = to_rational(q)
    if q == 0:
        raise PreconditionError("valuation of 0 is undefined")
    return vp_int(q.numerator, p) - vp_int(q.denominator, p)


def strip_primes(n: int, primes) -> int:
    """Remove every factor of the given primes from |n|."""
    n = abs(n)
    for p in primes:
        while n and n % p == 0:
            n //= p
    return n


@lru_cache(maxsize=4)
def _trial_primes(limit: int) -> Tuple[int, ...]:
    return tuple(primerange(2, limit + 1))


def _split_residue(n: int, budget: FactorBudget, found: Dict[int, int], context: str) -> None:
    """Factor a residue with no prime factor below the trial limit."""
    if n == 1:
        return
    if isprime(n):
        found[n] = found.get(n, 0) + 1
        return

    power = perfect_power(n)
    if power:
        base, exp = power
        sub: Dict[int, int] = {}
        _split_residue(base, budget, sub, context)
        for p, e in sub.items():
            found[p] = found.get(p, 0) + e * exp
        return

    logger.info(f"Falling back to rho on a {n.bit_length()}-bit residue")
    divisor = pollard_rho(
        n,
        retries=budget.rho_retries,
        seed=budget.seed,
        max_steps=budget.rho_max_steps,
    )
    if not divisor or divisor in (1, n):
        raise FactorizationBudgetError(n, context)
    _split_residue(divisor, budget, found, context)
    _split_residue(n // divisor, budget, found, context)


def factorize(n: int, budget: Optional[FactorBudget] = None, context: str = "") -> Factorization:
    """
    Complete prime factorization of a nonzero integer.

    Trial division up to the budget's limit, then a seeded rho search on what
    remains. A residue that resists the budget raises FactorizationBudgetError.
    """
    if n == 0:
        raise PreconditionError("cannot factor 0")
    budget = budget or DEFAULT_BUDGET
    sign = -1 if n < 0 else 1
    n = abs(n)
    found: Dict[int, int] = {}

    for p in _trial_primes(budget.trial_limit):
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            found[p] = e

    if n > 1:
        if n <= budget.trial_limit ** 2:
            # no factor below sqrt(n) survived trial division
            found[n] = found.get(n, 0) + 1
        else:
            _split_residue(n, budget, found, context)

    return Factorization(sign=sign, factors=tuple(sorted(found.items())))


def prime_factors(n: int, budget: Optional[FactorBudget] = None, context: str = "") -> List[int]:
    """Distinct primes dividing a nonzero integer."""
    return factorize(n, budget, context).primes


def divisors(n: int, budget: Optional[FactorBudget] = None) -> List[int]:
    """All positive divisors of n >= 1, ascending."""
    if n < 1:
        raise PreconditionError(f"divisors needs a positive integer, got {n}")
    fact = factorize(n, budget, context=f"divisors of {n}")
    result = []
    ranges = [[p ** k for k in range(e + 1)] for p, e in fact.factors]
    for combo in product(*ranges):
        d = 1
        for part in combo:
            d *= part
        result.append(d)
    return sorted(result)
