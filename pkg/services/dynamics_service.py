"""
Dynamics service - orbits, rational periodic points and finite-field cycle census.
"""

from typing import Dict, List, Optional, Set
import logging

import pandas as pd

from config.settings import DEFAULT_PERIOD_CAP, ITERATE_DEGREE_CAP
from models.forms import HomogForm, rational_roots
from models.points import ProjPoint
from models.rational_map import (
    RationalMap, compose, evaluate, rational_critical_points, reduce_mod_p
)
from models.reports import CycleCensus, OrbitRecord, PeriodicPoint
from services.cache_service import BaseCacheService
from utils.arith import FactorBudget
from utils.errors import DegreeCapExceeded, PreconditionError

logger = logging.getLogger(__name__)

_X = HomogForm.monomial(1, 0)
_Y = HomogForm.monomial(0, 1)


class DynamicsService:
    """
    Exact periodic-point enumeration up to a period cap.

    Enumeration solves Y*F_n - X*G_n = 0 for each iterate phi^n = [F_n : G_n];
    the result is complete for minimal periods up to the cap.
    """

    def __init__(
        self,
        period_cap: int = DEFAULT_PERIOD_CAP,
        degree_cap: int = ITERATE_DEGREE_CAP,
        budget: Optional[FactorBudget] = None,
        cache: Optional[BaseCacheService] = None,
    ):
        self.period_cap = period_cap
        self.degree_cap = degree_cap
        self.budget = budget
        self.cache = cache

    def resolve_cap(self, cap: Optional[int] = None) -> int:
        """The given period cap, or the service default when None."""
        cap = self.period_cap if cap is None else cap
        if cap < 1:
            raise PreconditionError(f"period cap must be >= 1, got {cap}")
        return cap

    # ------------------------------------------------------------------
    # orbits
    # ------------------------------------------------------------------

    def orbit(self, phi: RationalMap, P: ProjPoint, max_steps: int) -> OrbitRecord:
        """Forward orbit of P until the first repeat or max_steps applications."""
        if max_steps < 1:
            raise PreconditionError(f"max_steps must be >= 1, got {max_steps}")
        points = [P]
        seen = {P: 0}
        current = P
        for _ in range(max_steps):
            current = evaluate(phi, current)
            if current in seen:
                start = seen[current]
                return OrbitRecord(P, tuple(points), start, len(points) - start)
            seen[current] = len(points)
            points.append(current)
        return OrbitRecord(P, tuple(points), None, None)

    def minimal_period(self, phi: RationalMap, P: ProjPoint, cap: Optional[int] = None) -> Optional[int]:
        """Smallest n <= cap with phi^n(P) = P, or None."""
        cap = self.resolve_cap(cap)
        current = P
        for n in range(1, cap + 1):
            current = evaluate(phi, current)
            if current == P:
                return n
        return None

    # ------------------------------------------------------------------
    # periodic points
    # ------------------------------------------------------------------

    def periodic_points(self, phi: RationalMap, period_cap: Optional[int] = None) -> List[PeriodicPoint]:
        """
        Every rational periodic point of minimal period <= period_cap.

        Sorted by the canonical point ordering, then period.
        """
        cap = self.resolve_cap(period_cap)
        if phi.degree ** cap > self.degree_cap:
            raise DegreeCapExceeded(phi.degree ** cap, self.degree_cap)

        key = f"{phi.digest()}_{cap}"
        cached = self._load_cached(key)
        if cached is not None:
            return cached

        found: Dict[ProjPoint, int] = {}
        current = phi
        for n in range(1, cap + 1):
            if n > 1:
                current = compose(phi, current)
            fixed_form = _Y * current.F - _X * current.G
            if fixed_form.is_zero:
                raise PreconditionError(f"iterate {n} of {phi} is the identity; every point is periodic")
            roots = rational_roots(fixed_form, self.budget)
            new_points = [P for P in roots if P not in found]
            for P in new_points:
                found[P] = self.minimal_period(phi, P, n)
            logger.info(f"Period {n}: {len(roots)} rational roots, {len(new_points)} new")

        result = sorted((PeriodicPoint(P, m) for P, m in found.items()), key=PeriodicPoint.sort_key)
        self._store_cached(key, result)
        return result

    def cycles(self, phi: RationalMap, period_cap: Optional[int] = None) -> List[List[ProjPoint]]:
        """Periodic points grouped into cycles, each starting at its smallest point."""
        remaining = {pp.point for pp in self.periodic_points(phi, period_cap)}
        result = []
        for P in sorted(remaining):
            if P not in remaining:
                continue
            cycle = [P]
            current = evaluate(phi, P)
            while current != P:
                cycle.append(current)
                current = evaluate(phi, current)
            remaining.difference_update(cycle)
            result.append(cycle)
        return result

    def ramified_cycle_points(self, phi: RationalMap, period_cap: Optional[int] = None) -> Set[ProjPoint]:
        """Periodic points whose cycle contains a rational critical point."""
        if phi.degree < 2:
            return set()
        critical = {P for P, _ in rational_critical_points(phi, self.budget)}
        result: Set[ProjPoint] = set()
        for cycle in self.cycles(phi, period_cap):
            if critical.intersection(cycle):
                result.update(cycle)
        return result

    # ------------------------------------------------------------------
    # finite fields
    # ------------------------------------------------------------------

    def fp_cycle_census(self, phi: RationalMap, p: int, bad=None) -> CycleCensus:
        """Periodic residues and cycle lengths of phi reduced mod a good prime p."""
        reduced = reduce_mod_p(phi, p, bad)
        done: Set[ProjPoint] = set()
        lengths: List[int] = []
        members: List[ProjPoint] = []
        for start in reduced.points():
            if start in done:
                continue
            position: Dict[ProjPoint, int] = {}
            path: List[ProjPoint] = []
            x = start
            while x not in done and x not in position:
                position[x] = len(path)
                path.append(x)
                x = reduced.apply(x)
            if x in position:
                # the walk closed a cycle no earlier walk had reached
                length = len(path) - position[x]
                lengths.append(length)
                members.extend(path[position[x]:])
            done.update(path)
        return CycleCensus(p=p, periodic_count=len(members), cycle_lengths=tuple(sorted(lengths)),
                           residues=tuple(sorted(members)))

    # ------------------------------------------------------------------
    # cache
    # ------------------------------------------------------------------

    def _load_cached(self, key: str) -> Optional[List[PeriodicPoint]]:
        if self.cache is None or not self.cache.is_valid(key):
            return None
        df = self.cache.get(key)
        if df is None:
            return None
        return [
            PeriodicPoint(ProjPoint(int(row['a']), int(row['b'])), int(row['period']))
            for _, row in df.iterrows()
        ]

    def _store_cached(self, key: str, points: List[PeriodicPoint]) -> None:
        if self.cache is None:
            return
        df = pd.DataFrame(
            [(str(pp.point.a), str(pp.point.b), str(pp.minimal_period)) for pp in points],
            columns=['a', 'b', 'period'],
        )
        self.cache.set(key, df)
