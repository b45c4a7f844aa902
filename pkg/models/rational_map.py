"""
Rational self-maps of P1 over Q as primitive pairs of integer forms.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple
import hashlib
import logging

from config.settings import ITERATE_DEGREE_CAP
from models.forms import (
    HomogForm, eval_form, format_form, rational_roots, resultant, substitute, wronskian
)
from models.points import INFINITY, PlaceSet, ProjPoint, reduce_point
from utils.arith import FactorBudget, factorize
from utils.errors import DegenerateMapError, DegreeCapExceeded, PreconditionError

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[int, int], Tuple[int, int]]


@dataclass(frozen=True)
class RationalMap:
    """
    phi = [F : G] with deg F = deg G = d >= 1.

    The pair is primitive (joint content 1) and sign-normalized so the first
    nonzero coefficient of G is positive. Build through from_pair or
    from_polynomial; compose/iterate/conjugate reuse the normalizer without
    recomputing the resultant.
    """
    F: HomogForm
    G: HomogForm

    @property
    def degree(self) -> int:
        return self.F.degree

    def __str__(self) -> str:
        return descriptor(self)

    def digest(self) -> str:
        """Stable key for caching."""
        text = repr((self.F.coeffs, self.G.coeffs))
        return hashlib.sha256(text.encode('utf-8')).hexdigest()[:32]


def _normalize_pair(F: HomogForm, G: HomogForm) -> RationalMap:
    if F.degree != G.degree:
        raise DegenerateMapError(f"F and G must have equal degree, got {F.degree} and {G.degree}")
    if F.degree < 1:
        raise DegenerateMapError("a map of P1 needs degree >= 1")
    g = 0
    for c in F.coeffs + G.coeffs:
        g = gcd(g, c)
    if g == 0:
        raise DegenerateMapError("F and G are both zero")
    lead = next((c for c in G.coeffs if c), None)
    if lead is None:
        lead = next(c for c in F.coeffs if c)
    if lead < 0:
        g = -g
    return RationalMap(F.exact_div(g) if g != 1 else F, G.exact_div(g) if g != 1 else G)


def from_pair(F: HomogForm, G: HomogForm) -> RationalMap:
    """Primitive-normalized map [F : G]; rejects pairs with a common factor."""
    phi = _normalize_pair(F, G)
    if resultant(phi.F, phi.G) == 0:
        raise DegenerateMapError("degenerate pair (common factor): resultant is 0")
    return phi


def from_polynomial(coeffs: Sequence) -> RationalMap:
    """
    Map x -> f(x) for f with rational coefficients (lowest degree first).

    Clears denominators and homogenizes to [c*f(X,Y) : c*Y^d].
    """
    fracs = [Fraction(c) for c in coeffs]
    while fracs and fracs[-1] == 0:
        fracs.pop()
    d = len(fracs) - 1
    if d < 1:
        raise DegenerateMapError("constant polynomial does not define a map of degree >= 1")
    den = 1
    for q in fracs:
        den = lcm(den, q.denominator)
    F = HomogForm(d, tuple(int(q * den) for q in fracs))
    G = HomogForm.monomial(0, d, den)
    return _normalize_pair(F, G)


def evaluate(phi: RationalMap, P: ProjPoint) -> ProjPoint:
    """phi(P) in normalized coordinates."""
    return ProjPoint.of(eval_form(phi.F, (P.a, P.b)), eval_form(phi.G, (P.a, P.b)))


def compose(psi: RationalMap, phi: RationalMap) -> RationalMap:
    """psi o phi, of degree deg(psi) * deg(phi)."""
    return _normalize_pair(substitute(psi.F, phi.F, phi.G), substitute(psi.G, phi.F, phi.G))


def iterate(phi: RationalMap, n: int, degree_cap: int = ITERATE_DEGREE_CAP) -> RationalMap:
    """phi^n; refuses when d^n exceeds the degree cap."""
    if n < 1:
        raise PreconditionError(f"iterate needs n >= 1, got {n}")
    target = phi.degree ** n
    if target > degree_cap:
        raise DegreeCapExceeded(target, degree_cap)
    result = phi
    for _ in range(n - 1):
        result = compose(phi, result)
    logger.debug(f"Iterate {n} of a degree {phi.degree} map has degree {result.degree}")
    return result


def bad_primes(phi: RationalMap, budget: Optional[FactorBudget] = None) -> PlaceSet:
    """Primes dividing the resultant of the primitive pair."""
    res = resultant(phi.F, phi.G)
    if res == 0:
        raise DegenerateMapError("degenerate pair (common factor): resultant is 0")
    return PlaceSet.of(factorize(res, budget, context="resultant").primes)


@dataclass(frozen=True)
class ReducedMap:
    """The self-map of P1(F_p) induced by a map with good reduction at p."""
    p: int
    table: Dict[ProjPoint, ProjPoint]

    def apply(self, residue: ProjPoint) -> ProjPoint:
        return self.table[residue]

    def points(self) -> List[ProjPoint]:
        return list(self.table)


def residues(p: int) -> List[ProjPoint]:
    """The p + 1 points of P1(F_p)."""
    return [ProjPoint(r, 1) for r in range(p)] + [INFINITY]


def reduce_mod_p(phi: RationalMap, p: int, bad: Optional[PlaceSet] = None) -> ReducedMap:
    """Tabulate the reduction of phi over all of P1(F_p)."""
    bad = bad if bad is not None else bad_primes(phi)
    if p in bad:
        raise PreconditionError(f"{phi} has bad reduction at {p}")
    table = {}
    for R in residues(p):
        x = eval_form(phi.F, (R.a, R.b)) % p
        y = eval_form(phi.G, (R.a, R.b)) % p
        table[R] = INFINITY if y == 0 else ProjPoint(x * pow(y, -1, p) % p, 1)
    return ReducedMap(p=p, table=table)


def rational_critical_points(phi: RationalMap,
                             budget: Optional[FactorBudget] = None) -> List[Tuple[ProjPoint, int]]:
    """Rational roots of the Wronskian with their multiplicities."""
    if phi.degree < 2:
        raise PreconditionError("critical points need degree >= 2")
    roots = rational_roots(wronskian(phi.F, phi.G), budget)
    return roots.with_multiplicities()


def is_ramified(phi: RationalMap, P: ProjPoint, budget: Optional[FactorBudget] = None) -> bool:
    return any(Q == P for Q, _ in rational_critical_points(phi, budget))


def _linear_form(x: int, y: int) -> HomogForm:
    """x*X + y*Y."""
    return HomogForm(1, (y, x))


def apply_matrix(M: Matrix, P: ProjPoint) -> ProjPoint:
    """[alpha*a + beta*b : gamma*a + delta*b]."""
    (alpha, beta), (gamma, delta) = M
    return ProjPoint.of(alpha * P.a + beta * P.b, gamma * P.a + delta * P.b)


def conjugate(phi: RationalMap, M: Matrix) -> RationalMap:
    """M o phi o M^-1 as a primitive pair."""
    (alpha, beta), (gamma, delta) = M
    det = alpha * delta - beta * gamma
    if det == 0:
        raise DegenerateMapError("conjugating matrix is singular")
    # M^-1 up to scalar is the adjugate
    inv_x = _linear_form(delta, -beta)
    inv_y = _linear_form(-gamma, alpha)
    F1 = substitute(phi.F, inv_x, inv_y)
    G1 = substitute(phi.G, inv_x, inv_y)
    return _normalize_pair(F1.scale(alpha) + G1.scale(beta), F1.scale(gamma) + G1.scale(delta))


def is_monic_integer_polynomial(phi: RationalMap) -> bool:
    """True when phi is x -> f(x) with f monic in Z[x]."""
    d = phi.degree
    return phi.G == HomogForm.monomial(0, d) and phi.F.coeffs[d] == 1


def polynomial_coefficients(phi: RationalMap) -> Optional[List[Fraction]]:
    """Coefficients (lowest first) when phi is a polynomial map, else None."""
    if any(phi.G.coeffs[1:]):
        return None
    den = phi.G.coeffs[0]
    return [Fraction(c, den) for c in phi.F.coeffs]


def polynomial_expression(phi: RationalMap) -> Optional[str]:
    """Univariate rendering like 'x^3 - 6*x^2 + 12*x - 6', or None."""
    coeffs = polynomial_coefficients(phi)
    if coeffs is None:
        return None
    return format_polynomial(coeffs)


def format_polynomial(coeffs: Sequence[Fraction], var: str = "x") -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = Fraction(coeffs[i])
        if c == 0:
            continue
        mag = abs(c)
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    sign, body = terms[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def descriptor(phi: RationalMap) -> str:
    """Canonical text: the polynomial expression when there is one, else '[F : G]'."""
    expr = polynomial_expression(phi)
    if expr is not None:
        return expr
    return f"[{format_form(phi.F)} : {format_form(phi.G)}]"
