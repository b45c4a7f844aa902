"""
Integer binary homogeneous forms.

A form of degree D is stored as its D+1 coefficients c_0..c_D, where
H(X, Y) = sum_i c_i X^i Y^(D-i).
"""

from dataclasses import dataclass, field
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from models.points import INFINITY, ZERO, ProjPoint
from utils.arith import FactorBudget, divisors
from utils.errors import FactorizationBudgetError, PreconditionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HomogForm:
    """Binary form with exact integer coefficients; index i multiplies X^i Y^(D-i)."""
    degree: int
    coeffs: Tuple[int, ...]

    def __post_init__(self):
        if self.degree < 0:
            raise PreconditionError("form degree must be nonnegative")
        if len(self.coeffs) != self.degree + 1:
            raise PreconditionError(
                f"degree {self.degree} form needs {self.degree + 1} coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int]) -> 'HomogForm':
        coeffs = tuple(int(c) for c in coeffs)
        return cls(len(coeffs) - 1, coeffs)

    @classmethod
    def zero(cls, degree: int) -> 'HomogForm':
        return cls(degree, (0,) * (degree + 1))

    @classmethod
    def monomial(cls, i: int, j: int, c: int = 1) -> 'HomogForm':
        """c * X^i Y^j."""
        coeffs = [0] * (i + j + 1)
        coeffs[i] = c
        return cls(i + j, tuple(coeffs))

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: 'HomogForm') -> 'HomogForm':
        if self.degree != other.degree:
            raise PreconditionError(f"cannot add forms of degree {self.degree} and {other.degree}")
        return HomogForm(self.degree, tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: 'HomogForm') -> 'HomogForm':
        return self + other.scale(-1)

    def __mul__(self, other: 'HomogForm') -> 'HomogForm':
        out = [0] * (self.degree + other.degree + 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    if y:
                        out[i + j] += x * y
        return HomogForm(self.degree + other.degree, tuple(out))

    def scale(self, c: int) -> 'HomogForm':
        return HomogForm(self.degree, tuple(c * x for x in self.coeffs))

    def exact_div(self, c: int) -> 'HomogForm':
        return HomogForm(self.degree, tuple(x // c for x in self.coeffs))

    def __pow__(self, n: int) -> 'HomogForm':
        result = HomogForm(0, (1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __str__(self) -> str:
        return format_form(self)


def format_form(H: HomogForm) -> str:
    """Render as e.g. 'X^2 - 5*X*Y + 6*Y^2' (highest X power first)."""
    if H.is_zero:
        return "0"
    terms = []
    D = H.degree
    for i in range(D, -1, -1):
        c = H.coeffs[i]
        if not c:
            continue
        parts = []
        if i:
            parts.append("X" if i == 1 else f"X^{i}")
        if D - i:
            parts.append("Y" if D - i == 1 else f"Y^{D - i}")
        mono = "*".join(parts)
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{mag}*{mono}"
        else:
            body = str(mag)
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    first_sign, first_body = terms[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def eval_form(H: HomogForm, P: Tuple[int, int]) -> int:
    """H(a, b) exactly (Horner in X with running powers of b)."""
    a, b = P
    D = H.degree
    total = 0
    bpow = 1
    # accumulate from the highest X power so Y powers grow as we go
    for i in range(D, -1, -1):
        total = total * a + H.coeffs[i] * bpow
        bpow *= b
    return total


def content(H: HomogForm) -> int:
    """gcd of the absolute values of the coefficients."""
    if H.is_zero:
        raise PreconditionError("content of the zero form is undefined")
    g = 0
    for c in H.coeffs:
        g = gcd(g, c)
    return g


def _descending(H: HomogForm) -> List[int]:
    return list(reversed(H.coeffs))


def bareiss_determinant(matrix: List[List[int]]) -> int:
    """Fraction-free Gaussian elimination; exact for integer matrices."""
    n = len(matrix)
    if n == 0:
        return 1
    M = [row[:] for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (pivot * M[i][j] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = pivot
    return sign * M[n - 1][n - 1]


def sylvester_matrix(F: HomogForm, G: HomogForm) -> List[List[int]]:
    """Sylvester matrix with the d_F rows of G on top, then the d_G rows of F."""
    dF, dG = F.degree, G.degree
    n = dF + dG
    f, g = _descending(F), _descending(G)
    rows = []
    for shift in range(dF):
        rows.append([0] * shift + g + [0] * (n - shift - dG - 1))
    for shift in range(dG):
        rows.append([0] * shift + f + [0] * (n - shift - dF - 1))
    return rows


def resultant(F: HomogForm, G: HomogForm) -> int:
    """
    Resultant of two binary forms as the Sylvester determinant.

    Zero iff F and G share a projective root over the algebraic closure.
    Consumers only rely on its absolute value.
    """
    if F.is_zero or G.is_zero:
        raise PreconditionError("resultant of a zero form is undefined")
    return bareiss_determinant(sylvester_matrix(F, G))


def substitute(H: HomogForm, F: HomogForm, G: HomogForm) -> HomogForm:
    """H(F(X,Y), G(X,Y)); degree deg H * deg F."""
    if F.degree != G.degree:
        raise PreconditionError(f"substitute needs equal degrees, got {F.degree} and {G.degree}")
    D, d = H.degree, F.degree
    f_pows = [HomogForm(0, (1,))]
    g_pows = [HomogForm(0, (1,))]
    for _ in range(D):
        f_pows.append(f_pows[-1] * F)
        g_pows.append(g_pows[-1] * G)
    result = HomogForm.zero(D * d)
    for i, c in enumerate(H.coeffs):
        if c:
            result = result + (f_pows[i] * g_pows[D - i]).scale(c)
    return result


def partial_x(H: HomogForm) -> HomogForm:
    if H.degree == 0:
        return HomogForm(0, (0,))
    return HomogForm(H.degree - 1, tuple(i * H.coeffs[i] for i in range(1, H.degree + 1)))


def partial_y(H: HomogForm) -> HomogForm:
    if H.degree == 0:
        return HomogForm(0, (0,))
    D = H.degree
    return HomogForm(D - 1, tuple((D - i) * H.coeffs[i] for i in range(D)))


def wronskian(F: HomogForm, G: HomogForm) -> HomogForm:
    """F_X * G_Y - F_Y * G_X; its projective roots are the critical points of [F:G]."""
    if F.degree != G.degree:
        raise PreconditionError(f"wronskian needs equal degrees, got {F.degree} and {G.degree}")
    if F.degree < 1:
        raise PreconditionError("wronskian needs degree >= 1")
    return partial_x(F) * partial_y(G) - partial_y(F) * partial_x(G)


def divide_by_linear(H: HomogForm, P: ProjPoint) -> Optional[HomogForm]:
    """
    Exact quotient of H by the linear form b*X - a*Y vanishing at P = [a:b],
    or None when it does not divide H.
    """
    a, b = P.a, P.b
    D = H.degree
    if D == 0:
        return None
    c = H.coeffs
    q = [0] * D
    # c_k = b*q_(k-1) - a*q_k
    if a != 0:
        prev = 0
        for k in range(D):
            num = b * prev - c[k]
            if num % a:
                return None
            q[k] = num // a
            prev = q[k]
        if b * q[D - 1] != c[D]:
            return None
    else:
        # P = [0:1], the linear form is X
        if c[0] != 0:
            return None
        q = list(c[1:])
    return HomogForm(D - 1, tuple(q))


@dataclass
class RootSet:
    """Distinct rational roots of a form, with a multiplicity query."""
    form: HomogForm
    points: List[ProjPoint]
    _mult: Dict[ProjPoint, int] = field(default_factory=dict, repr=False)

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def __contains__(self, P: ProjPoint) -> bool:
        return P in self.points

    def multiplicity(self, P: ProjPoint) -> int:
        """Order of vanishing of the form at P, by repeated exact division."""
        if P in self._mult:
            return self._mult[P]
        count = 0
        current = self.form
        while True:
            quotient = divide_by_linear(current, P)
            if quotient is None:
                break
            count += 1
            current = quotient
        self._mult[P] = count
        return count

    def with_multiplicities(self) -> List[Tuple[ProjPoint, int]]:
        return [(P, self.multiplicity(P)) for P in self.points]


def _candidate_divisors(n: int, label: str, budget: Optional[FactorBudget]) -> List[int]:
    try:
        return divisors(abs(n), budget)
    except FactorizationBudgetError as e:
        raise FactorizationBudgetError(e.residue, f"{label} coefficient {n}") from e


def rational_roots(H: HomogForm, budget: Optional[FactorBudget] = None) -> RootSet:
    """
    Every point of P1(Q) where H vanishes, each listed once.

    Strips X^j and Y^k factors, then tests the rational-root candidates
    a | trailing, b | leading of the primitive core.
    """
    if H.is_zero:
        raise PreconditionError("rational_roots of the zero form")
    c = H.coeffs
    D = H.degree
    roots: List[ProjPoint] = []

    j = 0
    while c[j] == 0:
        j += 1
    k = 0
    while c[D - k] == 0:
        k += 1
    if j:
        roots.append(ZERO)
    if k:
        roots.append(INFINITY)

    core = HomogForm.from_coeffs(c[j:D - k + 1])
    if core.degree > 0:
        core = core.exact_div(content(core))
        trailing, leading = core.coeffs[0], core.coeffs[-1]
        at_one = eval_form(core, (1, 1))
        at_minus_one = eval_form(core, (-1, 1))
        nums = _candidate_divisors(trailing, "trailing", budget)
        dens = _candidate_divisors(leading, "leading", budget)
        logger.debug(f"Testing {2 * len(nums) * len(dens)} root candidates for degree {core.degree}")
        for den in dens:
            for num in nums:
                if gcd(num, den) != 1:
                    continue
                for a in (num, -num):
                    # (den*X - a*Y) divides core, so it divides core(1,1) and core(-1,1)
                    if at_one and (den - a) and at_one % (den - a):
                        continue
                    if at_minus_one and (den + a) and at_minus_one % (den + a):
                        continue
                    if eval_form(core, (a, den)) == 0:
                        roots.append(ProjPoint(a, den))

    roots.sort()
    return RootSet(form=H, points=roots)
