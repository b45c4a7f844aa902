"""
Named example maps, loaded from config/maps.json and referenced as @key,
plus the generated families (dfixed, period2, baron-cycle).
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional
import json
from pathlib import Path

from models.points import ProjPoint
from models.rational_map import RationalMap, format_polynomial
from utils.errors import PreconditionError
from utils.parsing import parse_map, parse_points


@dataclass
class CatalogEntry:
    """One named map."""
    key: str
    name: str
    expression: str
    description: str = ""
    expected_periodic: Optional[int] = None
    condition_set: List[str] = field(default_factory=list)

    @classmethod
    def from_dict(cls, key: str, data: dict) -> 'CatalogEntry':
        return cls(
            key=key,
            name=data['name'],
            expression=data['expression'],
            description=data.get('description', ''),
            expected_periodic=data.get('expected_periodic'),
            condition_set=list(data.get('condition_set', [])),
        )

    def to_map(self) -> RationalMap:
        return parse_map(self.expression)

    def condition_points(self) -> List[ProjPoint]:
        return parse_points(",".join(self.condition_set))


class MapCatalog:
    """Registry of named maps."""

    def __init__(self, config_path: Path):
        self._entries: Dict[str, CatalogEntry] = {}
        self._load_from_file(config_path)

    def _load_from_file(self, config_path: Path) -> None:
        if config_path.exists():
            with open(config_path, 'r', encoding='utf-8') as f:
                data = json.load(f)
                for key, config in data.items():
                    self._entries[key] = CatalogEntry.from_dict(key, config)

    def get(self, key: str) -> Optional[CatalogEntry]:
        return self._entries.get(key)

    def list_all(self) -> List[CatalogEntry]:
        return list(self._entries.values())

    def keys(self) -> List[str]:
        return list(self._entries.keys())

    def __iter__(self):
        return iter(self._entries.values())

    def __len__(self):
        return len(self._entries)


# ----------------------------------------------------------------------
# generated families
# ----------------------------------------------------------------------

def _mul(p: List[int], q: List[int]) -> List[int]:
    """Product of integer coefficient lists, lowest degree first."""
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _add(p: List[int], q: List[int]) -> List[int]:
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]


def dfixed_coefficients(d: int) -> List[int]:
    """(x-1)(x-2)...(x-d) + x: fixed points 1..d and infinity."""
    if d < 2:
        raise PreconditionError(f"dfixed needs d >= 2, got {d}")
    poly = [1]
    for i in range(1, d + 1):
        poly = _mul(poly, [-i, 1])
    return _add(poly, [0, 1])


def period2_coefficients(ns: List[int]) -> List[int]:
    """prod(x^2 - n^2) - x: each +-n is a 2-cycle."""
    if len(ns) < 2:
        raise PreconditionError(f"period2 needs at least two values, got {len(ns)}")
    if any(n <= 0 for n in ns):
        raise PreconditionError("period2 values must be positive integers")
    if len(set(ns)) != len(ns):
        raise PreconditionError(f"period2 values must be distinct, got {ns}")
    poly = [1]
    for n in ns:
        poly = _mul(poly, [-n * n, 0, 1])
    return _add(poly, [0, -1])


def baron_cycle_coefficients(a: int = 0, b: int = 2) -> List[int]:
    """
    Monic cubic with the 2-cycle (a, b) and the fixed point e = (a+b)/2.

    (x-a)(x-b)(x-e) vanishes on all three points, and a+b-x swaps a and b
    while fixing e.
    """
    if a == b:
        raise PreconditionError("baron-cycle needs a != b")
    if (a + b) % 2:
        raise PreconditionError(f"baron-cycle needs a+b even, got {a}+{b}")
    e = (a + b) // 2
    poly = _mul(_mul([-a, 1], [-b, 1]), [-e, 1])
    return _add(poly, [a + b, -1])


def generate_expression(family: str, d: int = 3, ns: Optional[List[int]] = None,
                        a: int = 0, b: int = 2) -> str:
    """Expanded polynomial text for one of the generated families."""
    if family == 'dfixed':
        coeffs = dfixed_coefficients(d)
    elif family == 'period2':
        coeffs = period2_coefficients(list(ns) if ns is not None else [1, 2])
    elif family == 'baron-cycle':
        coeffs = baron_cycle_coefficients(a, b)
    else:
        raise PreconditionError(f"unknown family '{family}' (expected dfixed, period2 or baron-cycle)")
    return format_polynomial(coeffs)
