"""
Exception hierarchy. Each error carries the CLI exit code it maps to.
"""

from typing import Optional


class ArithDynError(Exception):
    """Base class for all library errors."""
    exit_code = 2


class ResourceBudgetError(ArithDynError):
    """A configured effort budget was exhausted."""
    exit_code = 3


class FactorizationBudgetError(ResourceBudgetError):
    """Factorization gave up on a composite residue."""

    def __init__(self, residue: int, context: str = ""):
        self.residue = residue
        self.context = context
        where = f" ({context})" if context else ""
        super().__init__(f"unfactored residue {residue}{where}")


class DegreeCapExceeded(ResourceBudgetError):
    """An iterate would exceed the configured degree cap."""

    def __init__(self, degree: int, cap: int):
        self.degree = degree
        self.cap = cap
        super().__init__(f"iterate degree {degree} exceeds cap {cap}")


class ParseError(ArithDynError, ValueError):
    """Malformed map, point or prime-list text."""

    def __init__(self, message: str, text: str = "", position: Optional[int] = None):
        self.text = text
        self.position = position
        self.message = message
        if position is not None and text:
            detail = f"{message} at position {position}\n  {text}\n  {' ' * position}^"
        else:
            detail = message
        super().__init__(detail)


class DegenerateMapError(ArithDynError, ValueError):
    """The data does not define a morphism of P1 (common factor, constant, singular)."""


class PreconditionError(ArithDynError, ValueError):
    """An operation was called outside its domain."""
