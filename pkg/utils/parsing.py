"""
Text grammar for maps, points and prime lists.

Maps are either a univariate expression in x (rational coefficients,
+ - * / ^ and parentheses, division only by nonzero constants), a pair
"F=...; G=..." of homogeneous integer forms in X and Y, or the bracket
rendering "[F : G]".
"""

from fractions import Fraction
from typing import Dict, List, Optional, Tuple
import logging

from models.forms import HomogForm
from models.points import INFINITY, PlaceSet, ProjPoint
from models.rational_map import RationalMap, from_pair, from_polynomial
from utils.errors import ParseError, PreconditionError

logger = logging.getLogger(__name__)

# exponent tuple -> coefficient
Poly = Dict[Tuple[int, ...], Fraction]

MAX_EXPONENT = 4096


def _poly_add(p: Poly, q: Poly, sign: int = 1) -> Poly:
    out = dict(p)
    for k, c in q.items():
        out[k] = out.get(k, Fraction(0)) + sign * c
        if out[k] == 0:
            del out[k]
    return out


def _poly_mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for k1, c1 in p.items():
        for k2, c2 in q.items():
            k = tuple(a + b for a, b in zip(k1, k2))
            out[k] = out.get(k, Fraction(0)) + c1 * c2
            if out[k] == 0:
                del out[k]
    return out


def _constant_value(p: Poly) -> Optional[Fraction]:
    """The value of a constant polynomial, else None."""
    if not p:
        return Fraction(0)
    if len(p) == 1:
        (k, c), = p.items()
        if not any(k):
            return c
    return None


class _PolyParser:
    """Recursive-descent parser over a fixed set of variable names."""

    def __init__(self, text: str, variables: Tuple[str, ...], offset: int = 0, source: Optional[str] = None):
        self.text = text
        self.variables = variables
        self.pos = 0
        self.offset = offset
        self.source = source if source is not None else text

    def error(self, message: str, pos: Optional[int] = None) -> ParseError:
        where = self.pos if pos is None else pos
        return ParseError(message, self.source, self.offset + where)

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        if self.pos >= len(self.text):
            return ""
        if self.text.startswith("**", self.pos):
            return "^"
        return self.text[self.pos]

    def _advance(self, token: str) -> None:
        self._skip()
        self.pos += 2 if token == "^" and self.text.startswith("**", self.pos) else len(token)

    def _monomial(self, var_index: Optional[int] = None) -> Tuple[int, ...]:
        exps = [0] * len(self.variables)
        if var_index is not None:
            exps[var_index] = 1
        return tuple(exps)

    def parse(self) -> Poly:
        if not self.text.strip():
            raise self.error("empty expression", 0)
        poly = self._expr()
        if self._peek():
            raise self.error(f"unexpected '{self._peek()}'")
        return poly

    def _expr(self) -> Poly:
        poly = self._term()
        while self._peek() in ("+", "-"):
            op = self._peek()
            self._advance(op)
            rhs = self._term()
            poly = _poly_add(poly, rhs, 1 if op == "+" else -1)
        return poly

    def _term(self) -> Poly:
        poly = self._unary()
        while True:
            tok = self._peek()
            if tok == "*":
                self._advance("*")
                poly = _poly_mul(poly, self._unary())
            elif tok == "/":
                self._advance("/")
                self._skip()
                start = self.pos
                divisor = self._unary()
                value = _constant_value(divisor)
                if value is None:
                    raise self.error("division by a non-constant expression", start)
                if value == 0:
                    raise self.error("division by zero", start)
                poly = {k: c / value for k, c in poly.items()}
            elif tok and (tok == "(" or tok.isalpha()):
                # juxtaposition, e.g. 3x or (x-1)(x-2)
                poly = _poly_mul(poly, self._power())
            else:
                return poly

    def _unary(self) -> Poly:
        tok = self._peek()
        if tok in ("+", "-"):
            self._advance(tok)
            inner = self._unary()
            return inner if tok == "+" else {k: -c for k, c in inner.items()}
        return self._power()

    def _power(self) -> Poly:
        base = self._atom()
        if self._peek() == "^":
            self._advance("^")
            self._skip()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                raise self.error("expected a nonnegative integer exponent", start)
            n = int(self.text[start:self.pos])
            if n > MAX_EXPONENT:
                raise self.error(f"exponent {n} exceeds {MAX_EXPONENT}", start)
            result: Poly = {self._monomial(): Fraction(1)}
            for _ in range(n):
                result = _poly_mul(result, base)
            return result
        return base

    def _atom(self) -> Poly:
        tok = self._peek()
        if not tok:
            raise self.error("unexpected end of expression")
        if tok == "(":
            self._advance("(")
            inner = self._expr()
            if self._peek() != ")":
                raise self.error("expected ')'")
            self._advance(")")
            return inner
        if tok.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            value = Fraction(int(self.text[start:self.pos]))
            return {self._monomial(): value} if value else {}
        if tok.isalpha():
            start = self.pos
            if tok in self.variables:
                self.pos += 1
                return {self._monomial(self.variables.index(tok)): Fraction(1)}
            while self.pos < len(self.text) and self.text[self.pos].isalnum():
                self.pos += 1
            name = self.text[start:self.pos]
            if name not in self.variables:
                expected = " or ".join(self.variables)
                raise self.error(f"unknown variable '{name}' (expected {expected})", start)
            return {self._monomial(self.variables.index(name)): Fraction(1)}
        raise self.error(f"unexpected character '{tok}'")


def parse_polynomial(text: str) -> List[Fraction]:
    """Univariate polynomial in x, coefficients lowest degree first."""
    poly = _PolyParser(text, ("x",)).parse()
    if not poly:
        return [Fraction(0)]
    degree = max(k[0] for k in poly)
    return [poly.get((i,), Fraction(0)) for i in range(degree + 1)]


def _parse_form(text: str, offset: int, source: str) -> HomogForm:
    parser = _PolyParser(text, ("X", "Y"), offset, source)
    poly = parser.parse()
    if not poly:
        raise ParseError("form is identically zero", source, offset)
    degrees = {i + j for i, j in poly}
    if len(degrees) != 1:
        raise ParseError("form is not homogeneous", source, offset)
    degree = degrees.pop()
    coeffs = [Fraction(0)] * (degree + 1)
    for (i, _), c in poly.items():
        coeffs[i] = c
    if any(c.denominator != 1 for c in coeffs):
        raise ParseError("form coefficients must be integers", source, offset)
    return HomogForm(degree, tuple(int(c) for c in coeffs))


def _split_top_level(text: str, sep: str) -> List[Tuple[int, str]]:
    """Split on sep outside parentheses and brackets, keeping offsets."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append((start, text[start:i]))
            start = i + 1
    parts.append((start, text[start:]))
    return parts


def _parse_pair(text: str) -> RationalMap:
    forms: Dict[str, HomogForm] = {}
    for offset, chunk in _split_top_level(text, ";"):
        if not chunk.strip():
            continue
        if "=" not in chunk:
            raise ParseError("expected 'F=...' or 'G=...'", text, offset)
        name, body = chunk.split("=", 1)
        key = name.strip()
        if key not in ("F", "G"):
            raise ParseError(f"unknown form name '{key}' (expected F or G)", text, offset)
        if key in forms:
            raise ParseError(f"{key} given twice", text, offset)
        forms[key] = _parse_form(body, offset + len(name) + 1, text)
    if set(forms) != {"F", "G"}:
        raise ParseError("both F and G are required", text, len(text))
    return from_pair(forms["F"], forms["G"])


def _parse_bracket(text: str) -> RationalMap:
    stripped = text.strip()
    lead = text.index("[") + 1
    inner = stripped[1:-1]
    parts = _split_top_level(inner, ":")
    if len(parts) != 2:
        raise ParseError("expected '[F : G]'", text, lead)
    (off_f, f_text), (off_g, g_text) = parts
    return from_pair(_parse_form(f_text, lead + off_f, text), _parse_form(g_text, lead + off_g, text))


def parse_map(text: str) -> RationalMap:
    """
    Parse any of the three map syntaxes.

    Raises ParseError with a position for malformed text, and
    DegenerateMapError when the text is well formed but defines no map.
    """
    stripped = text.strip()
    if "=" in stripped:
        phi = _parse_pair(text)
    elif stripped.startswith("[") and stripped.endswith("]"):
        phi = _parse_bracket(text)
    else:
        phi = from_polynomial(parse_polynomial(text))
    logger.debug(f"Parsed '{text}' as {phi}")
    return phi


def parse_point(text: str) -> ProjPoint:
    """'5', '-3/7', 'inf' or '[4:6]', normalized."""
    s = text.strip()
    if not s:
        raise ParseError("empty point", text, 0)
    if s.lower() in ("inf", "infinity", "oo"):
        return INFINITY
    try:
        if s.startswith("[") and s.endswith("]"):
            a_text, sep, b_text = s[1:-1].partition(":")
            if not sep:
                raise ParseError("expected '[a:b]'", text, text.index("[") + 1)
            return ProjPoint.of(int(a_text), int(b_text))
        return _affine_point(s)
    except ParseError:
        raise
    except PreconditionError as e:
        raise ParseError(str(e), text, 0) from e
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"cannot read '{s}' as a point", text, 0)


def _affine_point(s: str) -> ProjPoint:
    num, sep, den = s.partition("/")
    a = int(num)
    b = int(den) if sep else 1
    if b == 0:
        raise ValueError("zero denominator")
    return ProjPoint.of(a, b)


def parse_points(text: str) -> List[ProjPoint]:
    """Comma-separated points."""
    return [parse_point(chunk) for _, chunk in _split_top_level(text, ",") if chunk.strip()]


def parse_int_list(text: str) -> List[int]:
    values = []
    for offset, chunk in _split_top_level(text, ","):
        if not chunk.strip():
            continue
        try:
            values.append(int(chunk))
        except ValueError:
            raise ParseError(f"expected an integer, got '{chunk.strip()}'", text, offset)
    return values


def parse_primes(text: Optional[str]) -> PlaceSet:
    """Comma-separated prime list; empty text is the empty set."""
    if text is None or not text.strip():
        return PlaceSet()
    primes = parse_int_list(text)
    try:
        return PlaceSet.of(primes)
    except PreconditionError as e:
        raise ParseError(str(e), text, 0) from e
