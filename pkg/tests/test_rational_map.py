"""
Tests for models/rational_map.py
"""

import pytest
from fractions import Fraction
from hypothesis import assume, given, settings, strategies as st

from models.forms import HomogForm, resultant
from models.points import INFINITY, ZERO, ProjPoint, chordal_valuation, cross_term, normalize, reduce_point
from models.rational_map import (
    RationalMap, apply_matrix, bad_primes, compose, conjugate, descriptor, evaluate,
    from_pair, from_polynomial, is_monic_integer_polynomial, is_ramified, iterate, polynomial_expression,
    rational_critical_points, reduce_mod_p
)
from utils.arith import prime_factors
from utils.errors import DegenerateMapError, DegreeCapExceeded, PreconditionError
from utils.parsing import parse_map

points = st.one_of(
    st.just(INFINITY),
    st.fractions(min_value=-30, max_value=30, max_denominator=10).map(normalize),
)


@st.composite
def form_pairs(draw, max_degree=3, bound=6):
    """Coprime pairs (F, G) of equal degree with small integer coefficients."""
    d = draw(st.integers(min_value=2, max_value=max_degree))
    coeffs = st.lists(st.integers(min_value=-bound, max_value=bound), min_size=d + 1, max_size=d + 1)
    F = HomogForm.from_coeffs(draw(coeffs))
    G = HomogForm.from_coeffs(draw(coeffs))
    assume(resultant(F, G) != 0)
    return F, G


class TestConstruction:
    """Tests for from_polynomial and from_pair."""

    def test_polynomial(self, square):
        """Test that x^2 becomes [X^2 : Y^2]."""
        assert square == RationalMap(HomogForm(2, (0, 0, 1)), HomogForm(2, (1, 0, 0)))

    def test_rational_coefficients_are_cleared(self):
        """Test that rational coefficients are cleared to a primitive pair."""
        phi = from_polynomial([Fraction(1, 2), 0, 1])
        assert phi.F.coeffs == (1, 0, 2)
        assert phi.G.coeffs == (2, 0, 0)

    def test_pair_is_primitive_and_sign_normalized(self):
        """Test that a pair is divided by its content and sign-normalized."""
        phi = from_pair(HomogForm.from_coeffs([-2, 0, -2]), HomogForm.from_coeffs([0, -2, 0]))
        assert phi.F.coeffs == (1, 0, 1)
        assert phi.G.coeffs == (0, 1, 0)

    def test_common_factor_is_degenerate(self):
        """Test that a common factor is rejected."""
        with pytest.raises(DegenerateMapError):
            from_pair(HomogForm.from_coeffs([-1, 0, 1]), HomogForm.from_coeffs([-1, 1, 0]))

    def test_constant_polynomial_is_degenerate(self):
        """Test that a constant polynomial is rejected."""
        with pytest.raises(DegenerateMapError):
            from_polynomial([5])

    def test_digest_is_stable(self, square):
        """Test that equal maps share a digest and different maps do not."""
        assert square.digest() == from_polynomial([0, 0, 1]).digest()
        assert square.digest() != from_polynomial([1, 0, 1]).digest()


class TestEvaluateAndCompose:
    """Tests for evaluate, compose and iterate."""

    def test_evaluate(self, square, dfixed3):
        """Test evaluation at finite points and infinity."""
        assert evaluate(square, ProjPoint(1, 2)) == ProjPoint(1, 4)
        assert evaluate(square, INFINITY) == INFINITY
        assert evaluate(dfixed3, ProjPoint(2, 1)) == ProjPoint(2, 1)

    def test_evaluate_rational_map(self):
        """Test evaluation of x + 1\/x at 0 and 2."""
        phi = parse_map("F=X^2+Y^2; G=X*Y")
        assert evaluate(phi, ZERO) == INFINITY
        assert evaluate(phi, ProjPoint(2, 1)) == ProjPoint(5, 2)

    def test_compose_square(self, square):
        """Test that x^2 composed with itself is x^4."""
        assert compose(square, square) == from_polynomial([0, 0, 0, 0, 1])

    @given(points)
    def test_composition_soundness(self, P):
        """Test that (psi o phi)(P) = psi(phi(P))."""
        psi = from_polynomial([1, 0, 1])
        phi = parse_map("F=X^2+Y^2; G=X*Y")
        assert evaluate(compose(psi, phi), P) == evaluate(psi, evaluate(phi, P))

    def test_iterate_degree(self, square):
        """Test that the third iterate of x^2 has degree 8."""
        assert iterate(square, 3).degree == 8

    def test_iterate_cap(self, square):
        """Test that iterating past the degree cap raises."""
        with pytest.raises(DegreeCapExceeded) as exc:
            iterate(square, 13)
        assert exc.value.degree == 8192

    def test_iterate_needs_positive_n(self, square):
        """Test that n = 0 is rejected."""
        with pytest.raises(PreconditionError):
            iterate(square, 0)


class TestReduction:
    """Tests for bad_primes and reduce_mod_p."""

    @settings(deadline=None)
    @given(form_pairs(), st.integers(min_value=-60, max_value=60).filter(lambda k: k != 0))
    def test_bad_primes_ignore_scaling(self, pair, k):
        """Test that rescaling both forms by a nonzero integer leaves the bad primes unchanged."""
        F, G = pair
        assert bad_primes(from_pair(F.scale(k), G.scale(k))) == bad_primes(from_pair(F, G))

    @settings(deadline=None)
    @given(form_pairs(), points, points)
    def test_good_primes_do_not_expand_distances(self, pair, P, Q):
        """Test that delta_p(phi P, phi Q) >= delta_p(P, Q) at every good prime."""
        assume(P != Q)
        phi = from_pair(*pair)
        bad = bad_primes(phi)
        for p in prime_factors(cross_term(P, Q)) + [2, 3, 5, 7]:
            if p in bad:
                continue
            assert chordal_valuation(evaluate(phi, P), evaluate(phi, Q), p) >= chordal_valuation(P, Q, p)

    def test_monic_polynomials_have_good_reduction(self, square, dfixed3, period2_12):
        """Test that monic integer polynomials have no bad primes."""
        for phi in (square, dfixed3, period2_12):
            assert len(bad_primes(phi)) == 0

    def test_scaled_denominator(self, bad_at_five):
        """Test that 5*Y^2 makes 5 bad."""
        assert list(bad_primes(bad_at_five)) == [5]

    def test_half_square(self):
        """Test that x^2\/2 has bad reduction at 2."""
        assert list(bad_primes(from_polynomial([0, 0, Fraction(1, 2)]))) == [2]

    def test_reduction_table(self, square):
        """Test the reduction of x^2 mod 5."""
        reduced = reduce_mod_p(square, 5)
        assert reduced.apply(ProjPoint(2, 1)) == ProjPoint(4, 1)
        assert reduced.apply(ProjPoint(4, 1)) == ProjPoint(1, 1)
        assert reduced.apply(INFINITY) == INFINITY
        assert len(reduced.points()) == 6

    def test_bad_prime_rejected(self, bad_at_five):
        """Test that reducing at a bad prime raises."""
        with pytest.raises(PreconditionError):
            reduce_mod_p(bad_at_five, 5)

    @given(points, st.sampled_from([2, 3, 5, 7, 11]))
    def test_reduction_commutes(self, P, p):
        """Test that reduction commutes with evaluation at good primes."""
        phi = from_polynomial([-6, 12, -6, 1])
        reduced = reduce_mod_p(phi, p)
        assert reduce_point(evaluate(phi, P), p) == reduced.apply(reduce_point(P, p))


class TestCriticalPoints:
    """Tests for rational_critical_points and is_ramified."""

    def test_square(self, square):
        """Test that x^2 is critical at 0 and infinity."""
        assert rational_critical_points(square) == [(ZERO, 1), (INFINITY, 1)]

    def test_x_plus_one_over_x(self):
        """Test that x + 1\/x is critical at -1 and 1."""
        phi = parse_map("F=X^2+Y^2; G=X*Y")
        assert rational_critical_points(phi) == [(ProjPoint(-1, 1), 1), (ProjPoint(1, 1), 1)]

    def test_cubic(self, ramified_pair):
        """Test multiplicities of the critical points of x^3 - x^2."""
        # W = 3*X*Y^2*(3X - 2Y)
        assert rational_critical_points(ramified_pair) == [(ZERO, 1), (ProjPoint(2, 3), 1), (INFINITY, 2)]

    def test_degree_one_rejected(self):
        """Test that degree 1 maps have no critical-point computation."""
        with pytest.raises(PreconditionError):
            rational_critical_points(from_polynomial([1, 1]))

    @settings(deadline=None)
    @given(form_pairs())
    def test_multiplicities_total_at_most_2d_minus_2(self, pair):
        """Test that rational critical points, counted with multiplicity, number at most 2d - 2."""
        phi = from_pair(*pair)
        found = rational_critical_points(phi)
        assert all(m >= 1 for _, m in found)
        assert sum(m for _, m in found) <= 2 * phi.degree - 2

    def test_is_ramified(self, ramified_pair):
        """Test is_ramified at a critical and a non-critical point."""
        assert is_ramified(ramified_pair, ProjPoint(2, 3))
        assert not is_ramified(ramified_pair, ProjPoint(1, 1))


class TestConjugationAndDescriptors:
    """Tests for conjugate, apply_matrix and descriptors."""

    def test_translate_square(self, square):
        """Test conjugating x^2 by a translation."""
        M = ((1, 1), (0, 1))
        assert conjugate(square, M) == from_polynomial([2, -2, 1])

    @given(points)
    def test_conjugation_intertwines(self, P):
        """Test that conjugation intertwines evaluation."""
        phi = from_polynomial([-6, 12, -6, 1])
        M = ((2, 1), (1, 1))
        conj = conjugate(phi, M)
        assert evaluate(conj, apply_matrix(M, P)) == apply_matrix(M, evaluate(phi, P))

    def test_singular_matrix(self, square):
        """Test that a singular matrix is rejected."""
        with pytest.raises(DegenerateMapError):
            conjugate(square, ((1, 2), (2, 4)))

    def test_monic_detection(self, dfixed3, bad_at_five):
        """Test monic integer polynomial detection."""
        assert is_monic_integer_polynomial(dfixed3)
        assert not is_monic_integer_polynomial(from_polynomial([0, 0, 2]))
        assert not is_monic_integer_polynomial(bad_at_five)

    def test_descriptor(self, dfixed3):
        """Test descriptors of polynomial and non-polynomial maps."""
        assert descriptor(dfixed3) == "x^3 - 6*x^2 + 12*x - 6"
        assert descriptor(parse_map("F=X^2+Y^2; G=X*Y")) == "[X^2 + Y^2 : X*Y]"
        assert polynomial_expression(parse_map("F=X^2+Y^2; G=X*Y")) is None

    def test_descriptor_parses_back(self, period2_12):
        """Test that a descriptor parses back to the same map."""
        assert parse_map(descriptor(period2_12)) == period2_12
