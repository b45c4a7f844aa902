"""
Result records shared by the services and the CLI.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import isinf
from typing import Dict, List, Optional, Tuple, Union

from config.settings import DISPLAY_MAX_DIGITS, SCHEMA_VERSION
from models.points import ProjPoint
from utils.formatters import format_big_int, format_log10


@dataclass(frozen=True)
class PeriodicPoint:
    """A rational periodic point and its minimal period."""
    point: ProjPoint
    minimal_period: int

    def sort_key(self):
        return (self.point.sort_key(), self.minimal_period)


@dataclass(frozen=True)
class OrbitRecord:
    """
    Forward orbit of a point.

    tail_length and cycle_length are None when the step cap was exhausted
    before any repeat.
    """
    start: ProjPoint
    points: Tuple[ProjPoint, ...]
    tail_length: Optional[int]
    cycle_length: Optional[int]

    @property
    def exceeded(self) -> bool:
        return self.cycle_length is None

    @property
    def is_periodic(self) -> bool:
        return self.tail_length == 0


@dataclass(frozen=True)
class CycleCensus:
    """Periodic residues of a reduced map and its cycle lengths (ascending)."""
    p: int
    periodic_count: int
    cycle_lengths: Tuple[int, ...]
    residues: Tuple[ProjPoint, ...] = field(default=(), compare=False)


class BoundFamily(Enum):
    """Which unit-equation bounds feed the formulas."""
    EVERTSE = "evertse"
    BS_ESS = "bs-ess"

    @classmethod
    def parse(cls, text: str) -> 'BoundFamily':
        for member in cls:
            if member.value == text.lower():
                return member
        raise ValueError(f"unknown bound family '{text}' (expected evertse or bs-ess)")


class BoundKind(Enum):
    EXACT = "EXACT"
    LOG10 = "LOG10"


@dataclass(frozen=True)
class BoundValue:
    """
    An explicit bound.

    EXACT carries the integer itself; LOG10 carries an upward-rounded rational
    upper bound on log10 of the true value.
    """
    kind: BoundKind
    exact: Optional[int] = None
    log10: Optional[Fraction] = None
    note: str = ""

    @classmethod
    def of_exact(cls, value: int, note: str = "") -> 'BoundValue':
        return cls(BoundKind.EXACT, exact=int(value), note=note)

    @classmethod
    def of_log10(cls, value: Fraction, note: str = "") -> 'BoundValue':
        return cls(BoundKind.LOG10, log10=Fraction(value), note=note)

    @property
    def is_exact(self) -> bool:
        return self.kind is BoundKind.EXACT

    def admits(self, count: int) -> bool:
        """count <= bound, decided exactly."""
        if self.is_exact:
            return count <= self.exact
        if count <= 1:
            return self.log10 >= 0
        digits = len(str(count))
        # count < 10^digits
        if self.log10 >= digits:
            return True
        # log10 is small here, so 10^log10 can be compared exactly via powers
        num, den = self.log10.numerator, self.log10.denominator
        return num >= 0 and count ** den <= 10 ** num

    def display(self, max_digits: int = DISPLAY_MAX_DIGITS) -> str:
        if self.is_exact:
            return format_big_int(self.exact, max_digits)
        return format_log10(self.log10)

    def to_dict(self) -> dict:
        return {
            'kind': self.kind.value,
            'exact': str(self.exact) if self.exact is not None else None,
            'log10': str(self.log10) if self.log10 is not None else None,
            'note': self.note,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'BoundValue':
        return cls(
            kind=BoundKind(data['kind']),
            exact=int(data['exact']) if data.get('exact') is not None else None,
            log10=Fraction(data['log10']) if data.get('log10') is not None else None,
            note=data.get('note', ''),
        )


class Status(Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    VACUOUS = "VACUOUS"


WitnessValue = Union[int, str, None]


def valuation_value(v) -> WitnessValue:
    """JSON-safe valuation: ints stay ints, the infinite sentinel becomes 'inf'."""
    if v is None:
        return None
    if isinstance(v, float) and isinf(v):
        return "inf"
    return int(v)


@dataclass(frozen=True)
class Witness:
    """One material check: a prime with both sides, or a list of points."""
    label: str
    prime: Optional[int] = None
    lhs: WitnessValue = None
    rhs: WitnessValue = None
    points: Tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            'label': self.label,
            'prime': self.prime,
            'lhs': self.lhs,
            'rhs': self.rhs,
            'points': list(self.points),
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'Witness':
        return cls(
            label=data['label'],
            prime=data.get('prime'),
            lhs=data.get('lhs'),
            rhs=data.get('rhs'),
            points=tuple(data.get('points', ())),
        )


@dataclass
class VerificationReport:
    """
    Verdict of one executable check.

    FAIL reports carry at least one witness with holds=False semantics
    (lhs != rhs, or a named offending prime); VACUOUS means the hypotheses
    were not met by the inputs.
    """
    claim: str
    subject: Dict[str, str]
    status: Status
    witnesses: List[Witness] = field(default_factory=list)
    notes: str = ""

    @property
    def passed(self) -> bool:
        return self.status is Status.PASS

    @property
    def failed(self) -> bool:
        return self.status is Status.FAIL

    def add_note(self, text: str) -> None:
        self.notes = f"{self.notes}; {text}" if self.notes else text

    def to_dict(self) -> dict:
        return {
            'claim': self.claim,
            'subject': dict(self.subject),
            'status': self.status.value,
            'witnesses': [w.to_dict() for w in self.witnesses],
            'notes': self.notes,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'VerificationReport':
        return cls(
            claim=data['claim'],
            subject=dict(data['subject']),
            status=Status(data['status']),
            witnesses=[Witness.from_dict(w) for w in data.get('witnesses', [])],
            notes=data.get('notes', ''),
        )


@dataclass(frozen=True)
class UnitEqSolution:
    """
    a*x + b*y = 1 with x, y S-units.

    exponent_vector maps each prime of S to its exponent in x;
    y_exponents does the same for y.
    """
    x: Fraction
    y: Fraction
    exponent_vector: Dict[int, int]
    y_exponents: Dict[int, int] = field(default_factory=dict)

    def __hash__(self):
        return hash((self.x, self.y))

    def __eq__(self, other):
        return isinstance(other, UnitEqSolution) and (self.x, self.y) == (other.x, other.y)


@dataclass
class AnalysisReport:
    """Everything cmd_analyze computes for one map."""
    map_descriptor: str
    degree: int
    bad_primes: List[int]
    s_value: int
    critical_points: List[Tuple[str, int]]
    period_cap: int
    periodic_points: List[Tuple[str, int]]
    bounds: Dict[str, BoundValue]
    verifications: List[VerificationReport]
    schema: str = SCHEMA_VERSION

    @property
    def any_failed(self) -> bool:
        return any(r.failed for r in self.verifications)

    def to_dict(self) -> dict:
        return {
            'schema': self.schema,
            'map': self.map_descriptor,
            'degree': self.degree,
            'bad_primes': list(self.bad_primes),
            's': self.s_value,
            'critical_points': [{'point': p, 'multiplicity': m} for p, m in self.critical_points],
            'period_cap': self.period_cap,
            'periodic_points': [{'point': p, 'period': n} for p, n in self.periodic_points],
            'bounds': {name: b.to_dict() for name, b in self.bounds.items()},
            'verifications': [r.to_dict() for r in self.verifications],
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'AnalysisReport':
        return cls(
            map_descriptor=data['map'],
            degree=data['degree'],
            bad_primes=list(data['bad_primes']),
            s_value=data['s'],
            critical_points=[(c['point'], c['multiplicity']) for c in data['critical_points']],
            period_cap=data['period_cap'],
            periodic_points=[(p['point'], p['period']) for p in data['periodic_points']],
            bounds={name: BoundValue.from_dict(b) for name, b in data['bounds'].items()},
            verifications=[VerificationReport.from_dict(r) for r in data['verifications']],
            schema=data.get('schema', SCHEMA_VERSION),
        )
