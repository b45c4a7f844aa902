"""
Bounds service - explicit bound formulas for periodic-point counts.

Every method returns a BoundValue. Values that fit are EXACT big integers;
the Beukers-Schlickewei / Evertse-Schlickewei-Schmidt constants are carried
as upward-rounded log10 values. Transcendental pieces are evaluated with
mpmath interval arithmetic so the reported numbers are certified.
"""

from fractions import Fraction
from math import ceil, floor
from typing import Iterable, List, Sequence, Tuple
import logging

from mpmath import iv
from mpmath.libmp.libmpf import to_rational

from config.settings import INTERVAL_PRECISION_BITS
from models.reports import BoundFamily, BoundValue
from utils.errors import PreconditionError, ResourceBudgetError
from utils.formatters import ceil_rational

logger = logging.getLogger(__name__)

# Precision doublings tried before a ceiling is declared unresolvable
_MAX_DOUBLINGS = 12


def _endpoints(x) -> Tuple[Fraction, Fraction]:
    """Exact rational endpoints of an mpmath interval, as plain-int Fractions."""
    lo, hi = x._mpi_
    p_lo, q_lo = to_rational(lo)
    p_hi, q_hi = to_rational(hi)
    # under a gmpy2 backend these are mpz
    return Fraction(int(p_lo), int(q_lo)), Fraction(int(p_hi), int(q_hi))


class _IntervalPrecision:
    """Temporarily set the interval context precision."""

    def __init__(self, bits: int):
        self.bits = bits
        self._saved = None

    def __enter__(self):
        self._saved = iv.prec
        iv.prec = self.bits
        return iv

    def __exit__(self, exc_type, exc, tb):
        iv.prec = self._saved
        return False


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise PreconditionError(message)


class BoundsService:
    """Explicit bounds, parameterized by s = |S| (archimedean place included)."""

    def __init__(self, precision_bits: int = INTERVAL_PRECISION_BITS):
        self.precision_bits = precision_bits

    # ------------------------------------------------------------------
    # unit-equation constants
    # ------------------------------------------------------------------

    def bound_b(self, s: int, family: BoundFamily = BoundFamily.EVERTSE) -> BoundValue:
        """Solution count bound for a*x + b*y = 1 in S-units."""
        _require(s >= 1, f"s must be >= 1, got {s}")
        if family is BoundFamily.EVERTSE:
            return BoundValue.of_exact(3 * 7 ** (4 * s))
        return BoundValue.of_exact(2 ** (16 * s))

    def bound_c(self, n: int, s: int, family: BoundFamily = BoundFamily.EVERTSE) -> BoundValue:
        """Non-degenerate solution count bound for the n-term unit equation."""
        _require(n >= 3, f"n must be >= 3, got {n}")
        _require(s >= 1, f"s must be >= 1, got {s}")
        if family is BoundFamily.EVERTSE:
            return BoundValue.of_exact(2 ** (35 * n ** 4 * s))
        # e^((6n)^(3n) (n r + 1)) with r = s - 1
        exponent = (6 * n) ** (3 * n) * (n * (s - 1) + 1)
        with _IntervalPrecision(self.precision_bits) as ctx:
            value = ctx.mpf(exponent) / ctx.log(10)
            _, hi = _endpoints(value)
        return BoundValue.of_log10(ceil_rational(hi), note="exp of an exponent too large to materialize")

    # ------------------------------------------------------------------
    # main theorem
    # ------------------------------------------------------------------

    def kappa(self, s: int, family: BoundFamily = BoundFamily.EVERTSE) -> BoundValue:
        """Slope in d: 3B + 13."""
        return BoundValue.of_exact(3 * self.bound_b(s, family).exact + 13)

    def lambda_value(self, s: int, family: BoundFamily = BoundFamily.EVERTSE) -> BoundValue:
        """Intercept: 27B + C(5) + 6C(3) + 31."""
        return self._affine_combination(
            [(27, self.bound_b(s, family)), (1, self.bound_c(5, s, family)), (6, self.bound_c(3, s, family))],
            constant=31,
        )

    def four_point_bound(self, d: int, s: int, family: BoundFamily = BoundFamily.EVERTSE) -> BoundValue:
        """(3B+13)d + 27B + C(5) + 6C(3) + 32."""
        _require(d >= 2, f"d must be >= 2, got {d}")
        B = self.bound_b(s, family)
        return self._affine_combination(
            [(d, self.kappa(s, family)), (27, B), (1, self.bound_c(5, s, family)), (6, self.bound_c(3, s, family))],
            constant=32,
        )

    def main_theorem_bound(self, d: int, s: int, family: BoundFamily = BoundFamily.EVERTSE) -> BoundValue:
        """kappa*d + lambda, one less than the four-point bound."""
        four = self.four_point_bound(d, s, family)
        if four.is_exact:
            return BoundValue.of_exact(four.exact - 1)
        # kappa*d + lambda < four-point bound, so its log10 bound still applies
        return BoundValue.of_log10(four.log10, note=f"{four.note}; equals four-point bound - 1")

    def semigroup_bound(self, degrees: Sequence[int], s: int,
                        family: BoundFamily = BoundFamily.EVERTSE) -> BoundValue:
        """Uniform bound over a composition semigroup: kappa*max(d_i) + lambda."""
        _require(len(degrees) > 0, "semigroup needs at least one generator")
        d = max(degrees)
        _require(d >= 2, "semigroup needs a generator of degree >= 2")
        return self.main_theorem_bound(d, s, family)

    # ------------------------------------------------------------------
    # three-point and corollary bounds
    # ------------------------------------------------------------------

    def three_point_bound(self, s: int) -> BoundValue:
        _require(s >= 1, f"s must be >= 1, got {s}")
        return BoundValue.of_exact(3 * 7 ** (4 * s) + 3)

    def degree_two_bound(self, s: int) -> BoundValue:
        """Bound for psi o phi with deg phi = 2 and a qualifying set."""
        return self.three_point_bound(s)

    def everywhere_good_bound(self, d: int) -> BoundValue:
        _require(d >= 2, f"d must be >= 2, got {d}")
        return BoundValue.of_exact(d + 5)

    def ramified_everywhere_good_bound(self) -> BoundValue:
        """Everywhere good reduction plus a qualifying set of periodic points."""
        return BoundValue.of_exact(4)

    def baron_bound(self, d: int) -> BoundValue:
        """Monic integer polynomials of degree d."""
        _require(d >= 2, f"d must be >= 2, got {d}")
        return BoundValue.of_exact(d + 1)

    # ------------------------------------------------------------------
    # period and orbit bounds
    # ------------------------------------------------------------------

    def ms_period_bound(self, bad_prime_count: int, field_degree: int = 1) -> BoundValue:
        """
        Certified ceiling of (12 t ln(5t))^(4 [K:Q]) with t = bad_prime_count + 2.

        The value is never an integer (ln of an integer > 1 is transcendental),
        so the ceiling is settled once the interval falls between two integers.
        """
        _require(bad_prime_count >= 0, "bad_prime_count must be >= 0")
        _require(field_degree >= 1, "field_degree must be >= 1")
        t = bad_prime_count + 2
        bits = self.precision_bits
        for _ in range(_MAX_DOUBLINGS):
            with _IntervalPrecision(bits) as ctx:
                value = (12 * t * ctx.log(5 * t)) ** (4 * field_degree)
                lo, hi = _endpoints(value)
            if ceil(lo) == ceil(hi) and floor(lo) != ceil(lo):
                return BoundValue.of_exact(ceil(hi))
            logger.info(f"Period bound ceiling ambiguous at {bits} bits, doubling")
            bits *= 2
        raise ResourceBudgetError(f"could not certify the period bound ceiling within {bits} bits")

    def canci_orbit_bound(self, s: int) -> BoundValue:
        """log10 of [e^(10^12) (s+1)^8 (ln(5(s+1)))^8]^s, rounded up."""
        _require(s >= 1, f"s must be >= 1, got {s}")
        with _IntervalPrecision(self.precision_bits) as ctx:
            ln_value = s * (ctx.mpf(10) ** 12 + 8 * ctx.log(s + 1) + 8 * ctx.log(ctx.log(5 * (s + 1))))
            value = ln_value / ctx.log(10)
            _, hi = _endpoints(value)
        return BoundValue.of_log10(ceil_rational(hi), note="preperiodic orbit length")

    # ------------------------------------------------------------------
    # helpers
    # ------------------------------------------------------------------

    def _log10_upper(self, value: BoundValue) -> Fraction:
        if not value.is_exact:
            return value.log10
        if value.exact <= 1:
            return Fraction(0)
        with _IntervalPrecision(self.precision_bits) as ctx:
            _, hi = _endpoints(ctx.log(ctx.mpf(value.exact)) / ctx.log(10))
        return hi

    def _affine_combination(self, terms: List[Tuple[int, BoundValue]], constant: int) -> BoundValue:
        """
        sum(m_i * T_i) + constant.

        With a LOG10 term the result is log10(sum of multipliers) plus the
        largest term's log10, rounded up.
        """
        if all(T.is_exact for _, T in terms):
            return BoundValue.of_exact(sum(m * T.exact for m, T in terms) + constant)
        weight = sum(m for m, _ in terms) + constant
        largest = max(self._log10_upper(T) for _, T in terms)
        with _IntervalPrecision(self.precision_bits) as ctx:
            _, slack = _endpoints(ctx.log(weight) / ctx.log(10))
        note = f"dominant addend plus log10({weight}) slack"
        return BoundValue.of_log10(ceil_rational(largest + slack), note=note)

    def bound_table(self, d: int, s: int, family: BoundFamily = BoundFamily.EVERTSE,
                    bad_prime_count: int = None) -> List[Tuple[str, BoundValue]]:
        """Every bound the CLI prints for (d, s), in display order."""
        bad_prime_count = s - 1 if bad_prime_count is None else bad_prime_count
        return [
            ('B', self.bound_b(s, family)),
            ('C(3)', self.bound_c(3, s, family)),
            ('C(5)', self.bound_c(5, s, family)),
            ('kappa', self.kappa(s, family)),
            ('lambda', self.lambda_value(s, family)),
            ('kappa*d+lambda', self.main_theorem_bound(d, s, family)),
            ('four-point', self.four_point_bound(d, s, family)),
            ('three-point', self.three_point_bound(s)),
            ('d+5', self.everywhere_good_bound(d)),
            ('d+1', self.baron_bound(d)),
            ('MS period', self.ms_period_bound(bad_prime_count)),
            ('orbit length', self.canci_orbit_bound(s)),
        ]
