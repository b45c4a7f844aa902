"""
Projective rational points in coprime integer coordinates, finite place sets,
and the p-adic chordal valuation.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, inf
from typing import Iterable, Tuple, Union

from sympy import isprime

from utils.arith import strip_primes, vp_int
from utils.errors import PreconditionError

# chordal valuation of a point against itself
INFINITE = inf

Valuation = Union[int, float]


@dataclass(frozen=True)
class ProjPoint:
    """
    A point [a:b] of P1(Q).

    Coordinates are coprime with b > 0, or (a, b) = (1, 0) for infinity.
    Use normalize() or ProjPoint.of() to build one from arbitrary data.
    """
    a: int
    b: int

    def __post_init__(self):
        if (self.a, self.b) == (0, 0):
            raise PreconditionError("[0:0] is not a projective point")
        if gcd(self.a, self.b) != 1 or self.b < 0 or (self.b == 0 and self.a != 1):
            raise PreconditionError(f"({self.a}, {self.b}) is not normalized; use normalize()")

    @classmethod
    def of(cls, a: int, b: int) -> 'ProjPoint':
        """Normalize a raw integer pair."""
        if a == 0 and b == 0:
            raise PreconditionError("[0:0] is not a projective point")
        g = gcd(a, b)
        a, b = a // g, b // g
        if b < 0 or (b == 0 and a < 0):
            a, b = -a, -b
        return cls(a, b)

    @property
    def is_infinity(self) -> bool:
        return self.b == 0

    def as_fraction(self) -> Fraction:
        if self.is_infinity:
            raise PreconditionError("infinity has no affine coordinate")
        return Fraction(self.a, self.b)

    def sort_key(self) -> Tuple[int, Fraction]:
        """Canonical ordering: finite points by value, infinity last."""
        if self.is_infinity:
            return (1, Fraction(0))
        return (0, Fraction(self.a, self.b))

    def __lt__(self, other: 'ProjPoint') -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        if self.is_infinity:
            return "inf"
        if self.b == 1:
            return str(self.a)
        return f"{self.a}/{self.b}"

    def homogeneous(self) -> str:
        return f"[{self.a}:{self.b}]"


INFINITY = ProjPoint(1, 0)
ZERO = ProjPoint(0, 1)
ONE = ProjPoint(1, 1)


def normalize(x) -> ProjPoint:
    """
    Canonical representative of a point.

    Accepts an int, a Fraction, the strings "inf"/"infinity", a raw integer
    pair (a, b), or an existing ProjPoint.
    """
    if isinstance(x, ProjPoint):
        return x
    if isinstance(x, str):
        if x.strip().lower() in ("inf", "infinity", "oo"):
            return INFINITY
        x = Fraction(x)
    if isinstance(x, tuple):
        a, b = x
        return ProjPoint.of(int(a), int(b))
    if isinstance(x, (int, Fraction)):
        q = Fraction(x)
        return ProjPoint(q.numerator, q.denominator)
    raise PreconditionError(f"cannot interpret {x!r} as a point of P1(Q)")


def cross_term(P: ProjPoint, Q: ProjPoint) -> int:
    """a_P * b_Q - a_Q * b_P; zero exactly when P = Q."""
    return P.a * Q.b - Q.a * P.b


def chordal_valuation(P: ProjPoint, Q: ProjPoint, p: int) -> Valuation:
    """
    p-adic chordal valuation delta_p(P, Q).

    With coprime coordinates this is the valuation of the cross term; equal
    points give INFINITE.
    """
    if P == Q:
        return INFINITE
    return vp_int(cross_term(P, Q), p)


@dataclass(frozen=True)
class PlaceSet:
    """
    Finite primes of a set S of places of Q.

    The archimedean place is always implicitly present, so s = |primes| + 1.
    """
    primes: Tuple[int, ...] = ()

    def __post_init__(self):
        if list(self.primes) != sorted(set(self.primes)):
            raise PreconditionError("PlaceSet primes must be distinct and sorted")
        for p in self.primes:
            if not isprime(p):
                raise PreconditionError(f"{p} is not prime")

    @classmethod
    def of(cls, primes: Iterable[int] = ()) -> 'PlaceSet':
        return cls(tuple(sorted(set(int(p) for p in primes))))

    @property
    def s(self) -> int:
        return len(self.primes) + 1

    def __contains__(self, p: int) -> bool:
        return p in self.primes

    def __iter__(self):
        return iter(self.primes)

    def __len__(self):
        return len(self.primes)

    def union(self, other: Iterable[int]) -> 'PlaceSet':
        return PlaceSet.of(set(self.primes) | set(other))

    def issuperset(self, other: Iterable[int]) -> bool:
        return set(other) <= set(self.primes)

    def __str__(self) -> str:
        inner = ", ".join(str(p) for p in self.primes)
        return "{" + inner + "}"


EMPTY_PLACES = PlaceSet()


def is_S_integral(P: ProjPoint, Q: ProjPoint, S: PlaceSet) -> bool:
    """True iff every prime dividing cross_term(P, Q) lies in S."""
    if P == Q:
        raise PreconditionError("S-integrality is undefined for coincident points")
    return strip_primes(cross_term(P, Q), S.primes) == 1


def reduce_point(P: ProjPoint, p: int) -> ProjPoint:
    """Residue of P in P1(F_p): [r:1] with 0 <= r < p, or [1:0]."""
    if P.b % p == 0:
        return INFINITY
    return ProjPoint(P.a * pow(P.b, -1, p) % p, 1)
