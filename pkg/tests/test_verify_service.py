"""
Tests for services/verify_service.py
"""

import pytest
from fractions import Fraction
from hypothesis import assume, given, settings, strategies as st

from models.forms import HomogForm, resultant
from models.points import INFINITY, PlaceSet, ProjPoint
from models.rational_map import from_pair, from_polynomial
from models.reports import Status, VerificationReport
from services.dynamics_service import DynamicsService
from services.verify_service import VerifyService
from utils.errors import PreconditionError

EMPTY = PlaceSet()


def P(x):
    if x == "inf":
        return INFINITY
    q = Fraction(x)
    return ProjPoint(q.numerator, q.denominator)


@st.composite
def quadratic_maps(draw):
    """Degree-2 maps [F : G] with coefficients in [-4, 4]."""
    coeffs = st.lists(st.integers(min_value=-4, max_value=4), min_size=3, max_size=3)
    F = HomogForm.from_coeffs(draw(coeffs))
    G = HomogForm.from_coeffs(draw(coeffs))
    assume(resultant(F, G) != 0)
    return from_pair(F, G)


class TestDistancePreservation:
    """Tests for check_distance_preservation and check_periodic_distances."""

    def test_two_cycle_pair(self, verify_service, period2_12):
        """Test 1 and 2, which lie on different 2-cycles of x^4 - 5x^2 - x + 4."""
        report = verify_service.check_distance_preservation(period2_12, P(1), P(2), EMPTY)
        assert report.status is Status.PASS

    def test_material_prime_is_reported(self, verify_service, period2_12):
        """Test that the only material prime for 1 and -1 is reported."""
        # cross terms of (1, -1) and of their images are both +-2
        report = verify_service.check_distance_preservation(period2_12, P(1), P(-1), EMPTY)
        assert report.passed
        assert [(w.prime, w.lhs, w.rhs) for w in report.witnesses] == [(2, 1, 1)]

    def test_fixed_points_close_at_two(self, verify_service, dfixed3):
        """Test that fixed points 1 and 3 are 2-adically close on both sides."""
        report = verify_service.check_distance_preservation(dfixed3, P(1), P(3), EMPTY)
        assert report.passed
        assert report.witnesses[0].prime == 2

    def test_non_periodic_point_is_vacuous(self, verify_service, square):
        """Test that a non-periodic point gives VACUOUS."""
        report = verify_service.check_distance_preservation(square, P(2), P(1), EMPTY)
        assert report.status is Status.VACUOUS

    def test_bad_reduction_outside_s_is_vacuous(self, verify_service, bad_at_five):
        """Test that a bad prime missing from S gives VACUOUS."""
        report = verify_service.check_distance_preservation(bad_at_five, P(0), P(5), EMPTY)
        assert report.status is Status.VACUOUS
        assert "5" in report.notes

    def test_with_second_map(self, verify_service, square):
        """Test the composed-map variant."""
        report = verify_service.check_distance_preservation(square, P(0), P(1), EMPTY, psi=square)
        assert report.passed

    def test_equal_points_rejected(self, verify_service, square):
        """Test that equal points raise."""
        with pytest.raises(PreconditionError):
            verify_service.check_distance_preservation(square, P(1), P(1), EMPTY)

    def test_all_pairs(self, verify_service, period2_12):
        """Test every pair of the five periodic points."""
        report = verify_service.check_periodic_distances(period2_12)
        assert report.passed
        assert report.notes.startswith("5 periodic points")

    def test_zero_cap_rejected(self, verify_service, period2_12):
        """Test that an explicit cap of 0 is rejected rather than replaced by the default."""
        with pytest.raises(PreconditionError):
            verify_service.check_periodic_distances(period2_12, cap=0)
        with pytest.raises(PreconditionError):
            verify_service.check_distance_preservation(period2_12, P(1), P(2), EMPTY, cap=0)


class TestDistanceProperties:
    """Distance checks on random quadratic maps."""

    verify = VerifyService(dynamics=DynamicsService(period_cap=2))

    @settings(max_examples=40, deadline=None)
    @given(quadratic_maps())
    def test_periodic_distances_hold_at_good_primes(self, phi):
        """Test that every pair of periodic points keeps its distance at each prime outside the bad set."""
        report = self.verify.check_periodic_distances(phi, cap=2)
        assert report.status is Status.PASS
        assert all(w.lhs == w.rhs for w in report.witnesses)


class TestConditionCount:
    """Tests for fiber, condition_count and qualifying sets."""

    def test_fiber(self, verify_service, ramified_pair):
        """Test the fiber over 0 with multiplicities."""
        assert verify_service.fiber(ramified_pair, P(0)) == [(P(0), 2), (P(1), 1)]

    def test_tail_point_completes_the_count(self, verify_service, ramified_pair):
        """Test that the tail point 1 lifts the count of {0, inf} to 3."""
        assert verify_service.condition_count(ramified_pair, [P(0), INFINITY]) == 3

    def test_single_ramified_fixed_point(self, verify_service, square):
        """Test the count of {0} for x^2."""
        assert verify_service.condition_count(square, [P(0)]) == 1

    def test_empty_set_rejected(self, verify_service, square):
        """Test that an empty set raises."""
        with pytest.raises(PreconditionError):
            verify_service.condition_count(square, [])

    def test_find_qualifying_set(self, verify_service, ramified_pair, square):
        """Test the smallest qualifying sets of two maps."""
        assert verify_service.find_qualifying_set(ramified_pair, [P(0), INFINITY]) == [P(0), INFINITY]
        assert verify_service.find_qualifying_set(square, [P(0), P(1), INFINITY]) == [P(0), P(1), INFINITY]

    def test_no_qualifying_set(self, verify_service, dfixed3):
        """Test that unramified fixed points never qualify."""
        assert verify_service.find_qualifying_set(dfixed3, [P(1), P(2), P(3), INFINITY]) is None

    def test_ramified_cycle_count(self, verify_service, square):
        """Test the widened count of {0, inf} for x^2."""
        assert verify_service.ramified_cycle_condition_count(square, [P(0), INFINITY], 2) == 2

    def test_check_condition_count(self, verify_service, ramified_pair):
        """Test the condition-count report and its bound witnesses."""
        report = verify_service.check_condition_count(ramified_pair, [P(0), INFINITY], EMPTY)
        assert report.passed
        assert report.witnesses[0].lhs == 3
        labels = [w.label for w in report.witnesses]
        assert "count <= 4" in labels

    def test_check_condition_count_below_three(self, verify_service, square):
        """Test that a count below 3 is VACUOUS with the count as witness."""
        report = verify_service.check_condition_count(square, [P(0)], EMPTY)
        assert report.status is Status.VACUOUS
        assert report.witnesses[0].lhs == 1


class TestIntegrality:
    """Tests for the ramified and tail integrality checks."""

    def test_ramified(self, verify_service, ramified_pair):
        """Test integrality of inf with respect to the ramified 0."""
        report = verify_service.check_ramified_integrality(ramified_pair, P(0), INFINITY, EMPTY)
        assert report.passed

    def test_unramified_q_is_vacuous(self, verify_service, square):
        """Test that an unramified Q gives VACUOUS."""
        report = verify_service.check_ramified_integrality(square, P(1), P(0), EMPTY)
        assert report.status is Status.VACUOUS

    def test_unpreserved_distance_is_vacuous(self, verify_service, ramified_pair):
        """Test that points with a shared image give VACUOUS."""
        # 1 and 0 share the image 0
        report = verify_service.check_ramified_integrality(ramified_pair, P(0), P(1), EMPTY)
        assert report.status is Status.VACUOUS

    def test_cycle_mode(self, verify_service, square):
        """Test the ramified-cycle variant."""
        report = verify_service.check_ramified_integrality(square, P(0), P(1), EMPTY, cycle_mode=True)
        assert report.passed
        assert report.claim == "ramified-cycle-integrality"

    def test_tail(self, verify_service, ramified_pair):
        """Test integrality of inf with respect to the tail point 1 of 0."""
        report = verify_service.check_tail_integrality(ramified_pair, P(0), P(1), INFINITY, EMPTY)
        assert report.passed

    def test_not_a_tail_point(self, verify_service, ramified_pair):
        """Test that a point outside the fiber is not a tail point."""
        report = verify_service.check_tail_integrality(ramified_pair, P(0), P(2), INFINITY, EMPTY)
        assert report.status is Status.VACUOUS


class TestMembership:
    """Tests for four- and three-point membership."""

    def test_periodic_points_are_members(self, verify_service, dfixed3):
        """Test that every periodic point is a four-point member."""
        A = [P(1), P(2), P(3), INFINITY]
        for X in (P(1), P(2), P(3), INFINITY):
            assert verify_service.four_point_membership(dfixed3, A, X, EMPTY)

    def test_non_member(self, verify_service, dfixed3):
        """Test that 0 is not a member."""
        # delta_7(0, 1) = 0 but phi(0) = -6 and phi(1) = 1 meet mod 7
        A = [P(1), P(2), P(3), INFINITY]
        assert not verify_service.four_point_membership(dfixed3, A, P(0), EMPTY)

    def test_needs_distinct_points(self, verify_service, dfixed3):
        """Test that repeated points raise."""
        with pytest.raises(PreconditionError):
            verify_service.four_point_membership(dfixed3, [P(1), P(1), P(3), INFINITY], P(2), EMPTY)

    def test_needs_distinct_images(self, verify_service, square):
        """Test that colliding images raise."""
        with pytest.raises(PreconditionError):
            verify_service.four_point_membership(square, [P(1), P(-1), P(0), INFINITY], P(0), EMPTY)

    def test_report(self, verify_service, dfixed3):
        """Test the membership report over all periodic points."""
        report = verify_service.check_four_point_membership(dfixed3, [P(1), P(2), P(3), INFINITY], EMPTY)
        assert report.passed
        assert report.notes == "4 points tested"

    def test_report_failure(self, verify_service, dfixed3):
        """Test that a non-member fails with a witness at 7."""
        report = verify_service.check_four_point_membership(
            dfixed3, [P(1), P(2), P(3), INFINITY], EMPTY, P=P(0)
        )
        assert report.failed
        assert any(w.prime == 7 and w.lhs != w.rhs for w in report.witnesses)

    def test_three_point(self, verify_service, ramified_pair):
        """Test three-point membership of 0."""
        assert verify_service.three_point_membership(ramified_pair, [P(0), INFINITY], P(0), EMPTY)


class TestMainTheorem:
    """Tests for verify_main_theorem."""

    def test_square(self, verify_service, square):
        """Test x^2 with its qualifying set and the d+5 and 4 bounds."""
        report = verify_service.verify_main_theorem(square)
        assert report.passed
        labels = [w.label for w in report.witnesses]
        assert "count <= d+5" in labels
        assert "count <= 4" in labels
        assert "qualifying set {0, 1, inf}" in report.notes

    def test_four_points_chosen(self, verify_service, dfixed3):
        """Test that the four smallest periodic points are chosen."""
        report = verify_service.verify_main_theorem(dfixed3)
        assert report.passed
        assert "four points {1, 2, 3, inf}" in report.notes

    def test_with_second_map(self, verify_service, square):
        """Test psi o phi without the single-map bound."""
        report = verify_service.verify_main_theorem(square, psi=from_polynomial([1, 0, 1]))
        assert report.passed
        assert "count <= d+5" not in [w.label for w in report.witnesses]

    def test_s_missing_bad_primes(self, verify_service, bad_at_five):
        """Test that S without the bad primes gives VACUOUS."""
        report = verify_service.verify_main_theorem(bad_at_five, S=EMPTY)
        assert report.status is Status.VACUOUS

    def test_degree_one_rejected(self, verify_service):
        """Test that degree 1 raises."""
        with pytest.raises(PreconditionError):
            verify_service.verify_main_theorem(from_polynomial([1, 2]))


class TestBaron:
    """Tests for verify_baron."""

    def test_interpolated_cycle(self, verify_service, baron_cycle):
        """Test the fixed point midway between a 2-cycle."""
        report = verify_service.verify_baron(baron_cycle)
        assert report.passed
        identity = [w for w in report.witnesses if w.label == "2e = a+b"]
        assert [(w.lhs, w.rhs) for w in identity] == [(2, 2)]

    def test_two_cycles(self, verify_service, period2_12):
        """Test that two 2-cycles share their sum."""
        report = verify_service.verify_baron(period2_12)
        assert report.passed
        sums = [w for w in report.witnesses if w.label == "a+b = c+d"]
        assert [(w.lhs, w.rhs) for w in sums] == [(0, 0)]

    def test_no_two_cycles(self, verify_service, dfixed3):
        """Test a map with fixed points only."""
        report = verify_service.verify_baron(dfixed3)
        assert report.passed
        assert "no 2-cycles" in report.notes

    def test_non_monic_rejected(self, verify_service, bad_at_five):
        """Test that a non-monic map raises."""
        with pytest.raises(PreconditionError):
            verify_service.verify_baron(bad_at_five)


class TestSemigroup:
    """Tests for check_semigroup."""

    def test_words(self, verify_service, square):
        """Test periodic counts along several words in x^2 and x^3."""
        cube = from_polynomial([0, 0, 0, 1])
        report = verify_service.check_semigroup([square, cube], [[0], [1], [0, 1], [1, 0, 0]])
        assert report.passed
        assert [w.lhs for w in report.witnesses] == [3, 4, 3, 3]

    def test_bad_word(self, verify_service, square):
        """Test that an out-of-range generator index raises."""
        with pytest.raises(PreconditionError):
            verify_service.check_semigroup([square], [[1]])

    def test_missing_bad_primes(self, verify_service, square, bad_at_five):
        """Test that a generator with bad primes outside S gives VACUOUS."""
        report = verify_service.check_semigroup([square, bad_at_five], [[0]], S=EMPTY)
        assert report.status is Status.VACUOUS


class TestUnitEquation:
    """Tests for solve_unit_equation_bounded."""

    def test_no_primes_two_one(self, verify_service):
        """Test 2x + y = 1 with S empty."""
        solutions = verify_service.solve_unit_equation_bounded(2, 1, EMPTY, 3)
        assert [(s.x, s.y) for s in solutions] == [(1, -1)]

    def test_no_primes_one_one(self, verify_service):
        """Test that x + y = 1 has no solutions with S empty."""
        assert verify_service.solve_unit_equation_bounded(1, 1, EMPTY, 3) == []

    def test_prime_two(self, verify_service):
        """Test x + y = 1 over {2} with exponent cap 1."""
        solutions = verify_service.solve_unit_equation_bounded(1, 1, PlaceSet.of([2]), 1)
        assert [(s.x, s.y) for s in solutions] == [
            (-1, 2), (Fraction(1, 2), Fraction(1, 2)), (2, -1)
        ]
        assert solutions[0].exponent_vector == {2: 0}
        assert solutions[0].y_exponents == {2: 1}

    def test_exponent_maps_rebuild_the_units(self, verify_service):
        """Test that both exponent maps are prime -> integer and rebuild |x| and |y|."""
        solutions = verify_service.solve_unit_equation_bounded(1, 1, PlaceSet.of([2, 3]), 3)
        assert solutions
        for sol in solutions:
            for exponents, value in ((sol.exponent_vector, sol.x), (sol.y_exponents, sol.y)):
                assert set(exponents) == {2, 3}
                assert all(type(e) is int for e in exponents.values())
                rebuilt = Fraction(1)
                for p, e in exponents.items():
                    rebuilt *= Fraction(p) ** e
                assert rebuilt == abs(value)

    def test_symmetric_when_coefficients_match(self, verify_service):
        """Test that swapping x and y maps solutions to solutions."""
        solutions = verify_service.solve_unit_equation_bounded(1, 1, PlaceSet.of([2, 3]), 2)
        pairs = {(s.x, s.y) for s in solutions}
        assert pairs == {(y, x) for x, y in pairs}

    def test_zero_coefficient_rejected(self, verify_service):
        """Test that a zero coefficient raises."""
        with pytest.raises(PreconditionError):
            verify_service.solve_unit_equation_bounded(0, 1, EMPTY, 1)


class TestInjectivity:
    """Tests for check_injectivity_mod_p."""

    @pytest.mark.parametrize("name,p", [("square", 3), ("period2_12", 7), ("dfixed3", 5)])
    def test_passes(self, verify_service, request, name, p):
        """Test injectivity at good primes above the collisions."""
        phi = request.getfixturevalue(name)
        assert verify_service.check_injectivity_mod_p(phi, p).passed

    def test_collision_mod_two(self, verify_service, dfixed3):
        """Test that 1 and 3 collide mod 2."""
        report = verify_service.check_injectivity_mod_p(dfixed3, 2)
        assert report.failed
        collisions = [w for w in report.witnesses if w.label == "collision"]
        assert [w.points for w in collisions] == [("1", "3")]

    def test_bad_prime_rejected(self, verify_service, bad_at_five):
        """Test that a bad prime raises."""
        with pytest.raises(PreconditionError):
            verify_service.check_injectivity_mod_p(bad_at_five, 5)


class TestReportSerialization:
    """Tests for VerificationReport serialization."""

    def test_round_trip(self, verify_service, dfixed3):
        """Test that a failing report survives to_dict/from_dict."""
        report = verify_service.check_four_point_membership(
            dfixed3, [P(1), P(2), P(3), INFINITY], EMPTY, P=P(0)
        )
        assert VerificationReport.from_dict(report.to_dict()) == report
