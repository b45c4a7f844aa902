"""
Verify service - executable checks of the distance, integrality, membership
and counting statements about rational periodic points.

"For every prime outside S" is decided exactly: a chordal valuation can only
be nonzero at a prime dividing the relevant cross term, so each check runs
over the finitely many primes dividing the nonzero cross terms involved.
Those primes are reported as witnesses.
"""

from fractions import Fraction
from itertools import combinations, product
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple
import logging

from models.forms import rational_roots
from models.points import (
    PlaceSet, ProjPoint, chordal_valuation, cross_term, is_S_integral
)
from models.rational_map import (
    RationalMap, bad_primes, compose, evaluate, is_monic_integer_polynomial,
    rational_critical_points
)
from models.reports import (
    BoundFamily, Status, UnitEqSolution, VerificationReport, Witness, valuation_value
)
from services.bounds_service import BoundsService
from services.dynamics_service import DynamicsService
from utils.arith import FactorBudget, prime_factors, strip_primes, vp
from utils.errors import PreconditionError
from utils.formatters import format_points

logger = logging.getLogger(__name__)

Points = Sequence[ProjPoint]


def _subject(phi: RationalMap, **extra) -> Dict[str, str]:
    subject = {'map': str(phi)}
    subject.update({k: str(v) for k, v in extra.items() if v is not None})
    return subject


def _report(claim: str, subject: Dict[str, str], witnesses: List[Witness],
            failed: bool, notes: str = "") -> VerificationReport:
    status = Status.FAIL if failed else Status.PASS
    return VerificationReport(claim, subject, status, witnesses, notes)


def _vacuous(claim: str, subject: Dict[str, str], reason: str) -> VerificationReport:
    logger.info(f"{claim} vacuous: {reason}")
    return VerificationReport(claim, subject, Status.VACUOUS, [], reason)


class VerifyService:
    """Checks built on top of the dynamics and bounds services."""

    def __init__(
        self,
        dynamics: Optional[DynamicsService] = None,
        bounds: Optional[BoundsService] = None,
        budget: Optional[FactorBudget] = None,
    ):
        self.dynamics = dynamics or DynamicsService(budget=budget)
        self.bounds = bounds or BoundsService()
        self.budget = budget if budget is not None else self.dynamics.budget

    # ------------------------------------------------------------------
    # shared helpers
    # ------------------------------------------------------------------

    def _material_primes(self, values: Iterable[int], S: PlaceSet) -> List[int]:
        """Primes outside S dividing any of the nonzero values."""
        primes: Set[int] = set()
        for v in values:
            if v:
                primes.update(prime_factors(v, self.budget, context="cross term"))
        return sorted(p for p in primes if p not in S)

    def _good_outside(self, S: PlaceSet, *maps: RationalMap) -> Optional[List[int]]:
        """Bad primes of the maps that S misses, each map factored on its own."""
        missing: Set[int] = set()
        for m in maps:
            missing.update(p for p in bad_primes(m, self.budget) if p not in S)
        return sorted(missing) or None

    def _delta_witnesses(self, phi: RationalMap, X: ProjPoint, P: ProjPoint,
                         S: PlaceSet, label: str) -> List[Witness]:
        """delta_p(X, P) against delta_p(phi X, phi P) at every material prime."""
        fX, fP = evaluate(phi, X), evaluate(phi, P)
        if X == P:
            return [Witness(label, None, "inf", "inf", (str(X), str(P)))]
        if fX == fP:
            # images collide while the points do not: differs at every prime
            return [Witness(label, None, "finite", "inf", (str(X), str(P)))]
        witnesses = []
        for p in self._material_primes((cross_term(X, P), cross_term(fX, fP)), S):
            lhs = chordal_valuation(X, P, p)
            rhs = chordal_valuation(fX, fP, p)
            witnesses.append(Witness(label, p, valuation_value(lhs), valuation_value(rhs), (str(X), str(P))))
        return witnesses

    @staticmethod
    def _holds(witnesses: Iterable[Witness]) -> bool:
        return all(w.lhs == w.rhs for w in witnesses)

    def _critical_set(self, phi: RationalMap) -> Set[ProjPoint]:
        if phi.degree < 2:
            return set()
        return {P for P, _ in rational_critical_points(phi, self.budget)}

    def _is_periodic(self, phi: RationalMap, P: ProjPoint, cap: int) -> bool:
        return self.dynamics.minimal_period(phi, P, cap) is not None

    # ------------------------------------------------------------------
    # distance preservation and integrality
    # ------------------------------------------------------------------

    def check_distance_preservation(
        self,
        phi: RationalMap,
        P: ProjPoint,
        Q: ProjPoint,
        S: PlaceSet,
        psi: Optional[RationalMap] = None,
        cap: Optional[int] = None,
    ) -> VerificationReport:
        """
        delta_p(P, Q) = delta_p(phi P, phi Q) for every p outside S.

        With psi given, P and Q need only be periodic for psi o phi.
        """
        claim = "distance-preservation"
        if P == Q:
            raise PreconditionError("distance preservation needs distinct points")
        cap = self.dynamics.resolve_cap(cap)
        subject = _subject(phi, psi=psi, P=P, Q=Q, S=S)
        maps = (phi,) if psi is None else (phi, psi)
        missing = self._good_outside(S, *maps)
        if missing:
            return _vacuous(claim, subject, f"bad reduction outside S at {missing}")
        orbit_map = phi if psi is None else compose(psi, phi)
        for X in (P, Q):
            if not self._is_periodic(orbit_map, X, cap):
                return _vacuous(claim, subject, f"{X} is not periodic within cap {cap}")
        witnesses = self._delta_witnesses(phi, P, Q, S, "delta")
        return _report(claim, subject, witnesses, not self._holds(witnesses))

    def check_periodic_distances(self, phi: RationalMap, S: Optional[PlaceSet] = None,
                                 cap: Optional[int] = None) -> VerificationReport:
        """Distance preservation for every pair of enumerated periodic points."""
        claim = "distance-preservation-all"
        cap = self.dynamics.resolve_cap(cap)
        S = S if S is not None else bad_primes(phi, self.budget)
        subject = _subject(phi, S=S, cap=cap)
        missing = self._good_outside(S, phi)
        if missing:
            return _vacuous(claim, subject, f"bad reduction outside S at {missing}")
        periodic = [pp.point for pp in self.dynamics.periodic_points(phi, cap)]
        witnesses = []
        for P, Q in combinations(periodic, 2):
            witnesses.extend(self._delta_witnesses(phi, P, Q, S, "delta"))
        notes = f"{len(periodic)} periodic points, {len(witnesses)} material checks"
        return _report(claim, subject, witnesses, not self._holds(witnesses), notes)

    def fiber(self, phi: RationalMap, Q: ProjPoint) -> List[Tuple[ProjPoint, int]]:
        """Rational preimages of Q with multiplicity."""
        form = phi.F.scale(Q.b) - phi.G.scale(Q.a)
        return rational_roots(form, self.budget).with_multiplicities()

    def condition_count(self, phi: RationalMap, A: Points) -> int:
        """Ramified members of A plus rational points of phi^-1(phi(A)) outside A."""
        return self._condition_count(phi, A, self._critical_set(phi))

    def ramified_cycle_condition_count(self, phi: RationalMap, A: Points, cap: Optional[int] = None) -> int:
        """condition_count with 'ramified' widened to 'belongs to a ramified cycle'."""
        return self._condition_count(phi, A, self.dynamics.ramified_cycle_points(phi, cap))

    def _condition_count(self, phi: RationalMap, A: Points, special: Set[ProjPoint],
                         fibers: Optional[Dict[ProjPoint, List[ProjPoint]]] = None) -> int:
        members = set(A)
        if not members:
            raise PreconditionError("condition count needs a nonempty set")
        fibers = {} if fibers is None else fibers
        ramified = sum(1 for X in members if X in special)
        outside: Set[ProjPoint] = set()
        for image in {evaluate(phi, X) for X in members}:
            if image not in fibers:
                fibers[image] = [R for R, _ in self.fiber(phi, image)]
            outside.update(R for R in fibers[image] if R not in members)
        return ramified + len(outside)

    def find_qualifying_set(self, phi: RationalMap, candidates: Points,
                            special: Optional[Set[ProjPoint]] = None) -> Optional[List[ProjPoint]]:
        """
        Smallest A among the candidates with condition count >= 3, or None.

        special defaults to the rational critical points; pass the ramified
        cycle points for the widened count. Subsets of size up to three suffice.
        """
        special = self._critical_set(phi) if special is None else special
        fibers: Dict[ProjPoint, List[ProjPoint]] = {}
        pool = sorted(set(candidates))
        for size in (1, 2, 3):
            for subset in combinations(pool, size):
                if self._condition_count(phi, subset, special, fibers) >= 3:
                    return list(subset)
        return None

    def check_ramified_integrality(
        self,
        phi: RationalMap,
        Q: ProjPoint,
        P: ProjPoint,
        S: PlaceSet,
        cycle_mode: bool = False,
        cap: Optional[int] = None,
    ) -> VerificationReport:
        """
        P is S-integral with respect to a ramified Q.

        In cycle mode Q only needs a ramified point in its (periodic) orbit,
        and P must be periodic too.
        """
        claim = "ramified-cycle-integrality" if cycle_mode else "ramified-integrality"
        cap = self.dynamics.resolve_cap(cap)
        subject = _subject(phi, Q=Q, P=P, S=S)
        if P == Q:
            return _vacuous(claim, subject, "P and Q coincide")
        missing = self._good_outside(S, phi)
        if missing:
            return _vacuous(claim, subject, f"bad reduction outside S at {missing}")

        if cycle_mode:
            for X in (P, Q):
                if not self._is_periodic(phi, X, cap):
                    return _vacuous(claim, subject, f"{X} is not periodic within cap {cap}")
            if Q not in self.dynamics.ramified_cycle_points(phi, cap):
                return _vacuous(claim, subject, f"the cycle of {Q} has no rational critical point")
        else:
            if Q not in self._critical_set(phi):
                return _vacuous(claim, subject, f"{Q} is not ramified")
            hypothesis = self._delta_witnesses(phi, P, Q, S, "delta")
            if not self._holds(hypothesis):
                return _vacuous(claim, subject, "distance between P and Q is not preserved outside S")

        return self._integrality_report(claim, subject, P, Q, S)

    def check_tail_integrality(
        self,
        phi: RationalMap,
        P: ProjPoint,
        Q: ProjPoint,
        R: ProjPoint,
        S: PlaceSet,
        cap: Optional[int] = None,
    ) -> VerificationReport:
        """A periodic R other than P is S-integral with respect to a length-1 tail point Q of P."""
        claim = "tail-integrality"
        cap = self.dynamics.resolve_cap(cap)
        subject = _subject(phi, P=P, Q=Q, R=R, S=S)
        missing = self._good_outside(S, phi)
        if missing:
            return _vacuous(claim, subject, f"bad reduction outside S at {missing}")
        if Q == P or evaluate(phi, Q) != evaluate(phi, P):
            return _vacuous(claim, subject, "Q is not a tail point of length 1 for P")
        if R == P or R == Q:
            return _vacuous(claim, subject, "R must differ from P and Q")
        for X in (P, R):
            if not self._is_periodic(phi, X, cap):
                return _vacuous(claim, subject, f"{X} is not periodic within cap {cap}")
        return self._integrality_report(claim, subject, R, Q, S)

    def _integrality_report(self, claim: str, subject: Dict[str, str],
                            P: ProjPoint, Q: ProjPoint, S: PlaceSet) -> VerificationReport:
        if is_S_integral(P, Q, S):
            return _report(claim, subject, [Witness("cross term", None, cross_term(P, Q), None, (str(P), str(Q)))],
                           failed=False)
        witnesses = [
            Witness("delta", p, chordal_valuation(P, Q, p), 0, (str(P), str(Q)))
            for p in self._material_primes([cross_term(P, Q)], S)
        ]
        return _report(claim, subject, witnesses, failed=True)

    # ------------------------------------------------------------------
    # membership
    # ------------------------------------------------------------------

    def four_point_membership(self, phi: RationalMap, points: Points, P: ProjPoint, S: PlaceSet) -> bool:
        """P lies in the set cut out by the four distance equations."""
        points = list(points)
        if len(points) != 4 or len(set(points)) != 4:
            raise PreconditionError("four-point membership needs four distinct points")
        if len({evaluate(phi, X) for X in points}) != 4:
            raise PreconditionError("four-point membership needs four distinct images")
        return self._holds(self.membership_witnesses(phi, points, P, S))

    def three_point_membership(self, phi: RationalMap, A: Points, P: ProjPoint, S: PlaceSet) -> bool:
        """delta_p(P, X) = delta_p(phi P, phi X) for every X in A and p outside S."""
        if not A:
            raise PreconditionError("membership needs a nonempty set")
        return self._holds(self.membership_witnesses(phi, A, P, S))

    def check_four_point_membership(
        self,
        phi: RationalMap,
        points: Points,
        S: PlaceSet,
        cap: Optional[int] = None,
        P: Optional[ProjPoint] = None,
    ) -> VerificationReport:
        """Membership of P, or of every enumerated periodic point, for four given points."""
        claim = "four-point-membership"
        cap = self.dynamics.resolve_cap(cap)
        subject = _subject(phi, points=format_points(points), S=S, P=P)
        targets = [P] if P is not None else [pp.point for pp in self.dynamics.periodic_points(phi, cap)]
        witnesses = []
        failed = False
        for target in targets:
            found = self.membership_witnesses(phi, points, target, S)
            if not self.four_point_membership(phi, points, target, S):
                failed = True
            witnesses.extend(found)
        return _report(claim, subject, witnesses, failed, f"{len(targets)} points tested")

    def membership_witnesses(self, phi: RationalMap, A: Points, P: ProjPoint, S: PlaceSet) -> List[Witness]:
        witnesses = []
        for X in A:
            witnesses.extend(self._delta_witnesses(phi, X, P, S, "membership"))
        return witnesses

    # ------------------------------------------------------------------
    # counting theorems
    # ------------------------------------------------------------------

    def verify_main_theorem(
        self,
        phi: RationalMap,
        psi: Optional[RationalMap] = None,
        S: Optional[PlaceSet] = None,
        cap: Optional[int] = None,
        family: BoundFamily = BoundFamily.EVERTSE,
    ) -> VerificationReport:
        """Periodic count of psi o phi against kappa*d + lambda and its refinements."""
        claim = "main-theorem"
        if phi.degree < 2:
            raise PreconditionError("the main theorem needs deg phi >= 2")
        cap = self.dynamics.resolve_cap(cap)
        maps = (phi,) if psi is None else (phi, psi)
        needed: Set[int] = set()
        for m in maps:
            needed.update(bad_primes(m, self.budget))
        S = S if S is not None else PlaceSet.of(needed)
        subject = _subject(phi, psi=psi, S=S, cap=cap, family=family.value)
        if not S.issuperset(needed):
            return _vacuous(claim, subject, f"S misses bad primes {sorted(needed - set(S))}")

        composite = phi if psi is None else compose(psi, phi)
        periodic = [pp.point for pp in self.dynamics.periodic_points(composite, cap)]
        count = len(periodic)
        witnesses: List[Witness] = []
        failed = False
        report = VerificationReport(claim, subject, Status.PASS)

        def bound_check(label: str, bound) -> None:
            nonlocal failed
            ok = bound.admits(count)
            witnesses.append(Witness(label, None, count, bound.display(), ()))
            failed = failed or not ok

        bound_check("count <= kappa*d+lambda", self.bounds.main_theorem_bound(phi.degree, S.s, family))

        if count >= 4:
            chosen = periodic[:4]
            report.add_note(f"four points {format_points(chosen)}")
            for P in periodic:
                found = self.membership_witnesses(phi, chosen, P, S)
                if not self._holds(found):
                    failed = True
                    witnesses.extend(w for w in found if w.lhs != w.rhs)

        if psi is None and len(S) == 0:
            bound_check("count <= d+5", self.bounds.everywhere_good_bound(phi.degree))

        if phi.degree == 2:
            bound_check("degree 2: count <= 3*7^(4s)+3", self.bounds.degree_two_bound(S.s))

        A = self.find_qualifying_set(phi, periodic)
        if A is not None:
            report.add_note(f"qualifying set {format_points(A)}")
            bound_check("count <= 3*7^(4s)+3", self.bounds.three_point_bound(S.s))
            for P in periodic:
                found = self.membership_witnesses(phi, A, P, S)
                if not self._holds(found):
                    failed = True
                    witnesses.extend(w for w in found if w.lhs != w.rhs)

        if psi is None and len(S) == 0:
            if A is None:
                cycle_points = self.dynamics.ramified_cycle_points(phi, cap)
                A = self.find_qualifying_set(phi, periodic, special=cycle_points)
                if A is not None:
                    report.add_note(f"qualifying set (ramified cycles) {format_points(A)}")
            if A is not None:
                bound_check("count <= 4", self.bounds.ramified_everywhere_good_bound())

        report.witnesses = witnesses
        report.status = Status.FAIL if failed else Status.PASS
        return report

    def check_condition_count(
        self,
        phi: RationalMap,
        A: Points,
        S: PlaceSet,
        cap: Optional[int] = None,
    ) -> VerificationReport:
        """Condition count for A, and when it reaches 3 the bounds it unlocks."""
        claim = "condition-count"
        cap = self.dynamics.resolve_cap(cap)
        subject = _subject(phi, A=format_points(sorted(set(A))), S=S)
        count = self.condition_count(phi, A)
        witness = Witness("condition count", None, count, 3, tuple(str(X) for X in sorted(set(A))))
        if count < 3:
            report = _vacuous(claim, subject, f"condition count {count} < 3")
            report.witnesses = [witness]
            return report
        missing = self._good_outside(S, phi)
        if missing:
            report = _vacuous(claim, subject, f"bad reduction outside S at {missing}")
            report.witnesses = [witness]
            return report
        periodic = [pp.point for pp in self.dynamics.periodic_points(phi, cap)]
        if not set(A) <= set(periodic):
            report = _vacuous(claim, subject, "A is not a set of periodic points")
            report.witnesses = [witness]
            return report

        witnesses = [witness]
        failed = False
        checks = [("count <= 3*7^(4s)+3", self.bounds.three_point_bound(S.s))]
        if len(S) == 0:
            checks.append(("count <= 4", self.bounds.ramified_everywhere_good_bound()))
        for label, bound in checks:
            witnesses.append(Witness(label, None, len(periodic), bound.display(), ()))
            failed = failed or not bound.admits(len(periodic))
        for P in periodic:
            found = self.membership_witnesses(phi, list(A), P, S)
            if not self._holds(found):
                failed = True
                witnesses.extend(w for w in found if w.lhs != w.rhs)
        return _report(claim, subject, witnesses, failed)

    def verify_baron(self, f: RationalMap, cap: Optional[int] = None) -> VerificationReport:
        """
        Monic integer polynomials: at most d+1 rational periodic points, no
        period beyond 2, and the cycle-sum identities.
        """
        claim = "baron"
        if not is_monic_integer_polynomial(f):
            raise PreconditionError(f"{f} is not a monic integer polynomial")
        if f.degree < 2:
            raise PreconditionError("Baron checks need degree >= 2")
        cap = self.dynamics.resolve_cap(cap)
        subject = _subject(f, cap=cap)
        periodic = self.dynamics.periodic_points(f, cap)
        witnesses: List[Witness] = []
        failed = False

        bound = self.bounds.baron_bound(f.degree)
        witnesses.append(Witness("count <= d+1", None, len(periodic), bound.exact, ()))
        failed = failed or not bound.admits(len(periodic))

        for pp in periodic:
            if pp.minimal_period > 2:
                witnesses.append(Witness("period <= 2", None, pp.minimal_period, 2, (str(pp.point),)))
                failed = True

        finite = [pp for pp in periodic if not pp.point.is_infinity]
        fixed = [int(pp.point.as_fraction()) for pp in finite if pp.minimal_period == 1]
        two_cycles = []
        for pp in finite:
            if pp.minimal_period == 2:
                a = int(pp.point.as_fraction())
                b = int(evaluate(f, pp.point).as_fraction())
                if a < b:
                    two_cycles.append((a, b))

        notes = ""
        if not two_cycles:
            notes = "no 2-cycles; cycle-sum identities vacuous"
        for a, b in two_cycles:
            for e in fixed:
                witnesses.append(Witness("2e = a+b", None, 2 * e, a + b, (str(a), str(b), str(e))))
                failed = failed or 2 * e != a + b
        for (a, b), (c, d) in combinations(two_cycles, 2):
            witnesses.append(Witness("a+b = c+d", None, a + b, c + d, (str(a), str(b), str(c), str(d))))
            failed = failed or a + b != c + d
        if two_cycles:
            a, b = two_cycles[0]
            h = a + b
            for pp in finite:
                x = int(pp.point.as_fraction())
                image = int(evaluate(f, pp.point).as_fraction())
                witnesses.append(Witness("b + f(b) = h", None, x + image, h, (str(x),)))
                failed = failed or x + image != h

        return _report(claim, subject, witnesses, failed, notes)

    def check_semigroup(
        self,
        generators: Sequence[RationalMap],
        words: Sequence[Sequence[int]],
        S: Optional[PlaceSet] = None,
        cap: Optional[int] = None,
        family: BoundFamily = BoundFamily.EVERTSE,
    ) -> VerificationReport:
        """
        Every composed word obeys the uniform bound kappa*max(d_i) + lambda.

        A word (i1, ..., ik) is the map phi_i1 o ... o phi_ik.
        """
        claim = "semigroup"
        if not generators:
            raise PreconditionError("semigroup needs at least one generator")
        cap = self.dynamics.resolve_cap(cap)
        needed: Set[int] = set()
        for g in generators:
            needed.update(bad_primes(g, self.budget))
        S = S if S is not None else PlaceSet.of(needed)
        subject = {
            'generators': "; ".join(str(g) for g in generators),
            'S': str(S),
            'cap': str(cap),
            'family': family.value,
        }
        if not S.issuperset(needed):
            return _vacuous(claim, subject, f"S misses bad primes {sorted(needed - set(S))}")
        bound = self.bounds.semigroup_bound([g.degree for g in generators], S.s, family)
        witnesses = []
        failed = False
        for word in words:
            if not word or any(i < 0 or i >= len(generators) for i in word):
                raise PreconditionError(f"word {tuple(word)} does not index the generators")
            composite = generators[word[-1]]
            for i in reversed(word[:-1]):
                composite = compose(generators[i], composite)
            count = len(self.dynamics.periodic_points(composite, cap))
            witnesses.append(Witness("count <= kappa*d+lambda", None, count, bound.display(),
                                     tuple(str(i) for i in word)))
            failed = failed or not bound.admits(count)
        return _report(claim, subject, witnesses, failed)

    # ------------------------------------------------------------------
    # unit equation and finite-field cross-checks
    # ------------------------------------------------------------------

    def solve_unit_equation_bounded(self, a, b, S: PlaceSet, exponent_cap: int) -> List[UnitEqSolution]:
        """
        All S-unit solutions of a*x + b*y = 1 with every exponent in [-cap, cap].

        x runs over the signed exponent box; y is then forced and is kept
        when it is an S-unit inside the same box.
        """
        a, b = Fraction(a), Fraction(b)
        if a == 0 or b == 0:
            raise PreconditionError("unit equation needs nonzero coefficients")
        if exponent_cap < 0:
            raise PreconditionError("exponent cap must be >= 0")
        primes = list(S)
        box = range(-exponent_cap, exponent_cap + 1)
        solutions = []
        for sign in (1, -1):
            for exps in product(box, repeat=len(primes)):
                x = Fraction(sign)
                for p, e in zip(primes, exps):
                    x *= Fraction(p) ** e
                y = (1 - a * x) / b
                if y == 0 or not self._in_unit_box(y, primes, exponent_cap):
                    continue
                solutions.append(UnitEqSolution(
                    x, y,
                    exponent_vector=dict(zip(primes, exps)),
                    y_exponents={p: vp(y, p) for p in primes},
                ))
        solutions.sort(key=lambda sol: (sol.x, sol.y))
        logger.info(f"Unit equation {a}x + {b}y = 1 over {S}: {len(solutions)} solutions in the box")
        return solutions

    @staticmethod
    def _in_unit_box(y: Fraction, primes: List[int], cap: int) -> bool:
        if strip_primes(y.numerator, primes) != 1 or strip_primes(y.denominator, primes) != 1:
            return False
        return all(abs(vp(y, p)) <= cap for p in primes)

    def check_injectivity_mod_p(self, phi: RationalMap, p: int, cap: Optional[int] = None) -> VerificationReport:
        """Distinct rational periodic points stay distinct mod a good prime p."""
        claim = "injectivity-mod-p"
        bad = bad_primes(phi, self.budget)
        if p in bad:
            raise PreconditionError(f"{phi} has bad reduction at {p}")
        cap = self.dynamics.resolve_cap(cap)
        subject = _subject(phi, p=p, cap=cap)
        periodic = [pp.point for pp in self.dynamics.periodic_points(phi, cap)]
        census = self.dynamics.fp_cycle_census(phi, p, bad)
        witnesses = [Witness("rational <= residues", p, len(periodic), census.periodic_count, ())]
        failed = len(periodic) > census.periodic_count
        for P, Q in combinations(periodic, 2):
            if cross_term(P, Q) % p == 0:
                witnesses.append(Witness("collision", p, chordal_valuation(P, Q, p), 0, (str(P), str(Q))))
                failed = True
        return _report(claim, subject, witnesses, failed)
