"""
Formatting utilities for big integers, log-scale bounds, points and valuations.
"""

from fractions import Fraction
from math import ceil, isinf
from typing import Iterable

from config.settings import DISPLAY_MAX_DIGITS

_LOG10_2 = 0.30102999566398


def decimal_digits(n: int) -> int:
    """
    Number of decimal digits of |n| without building its decimal string.

    Args:
        n: Any integer

    Returns:
        Digit count (1 for zero)
    """
    n = abs(n)
    if n < 10:
        return 1
    k = max(0, int((n.bit_length() - 1) * _LOG10_2) - 1)
    while 10 ** (k + 1) <= n:
        k += 1
    return k + 1


def format_big_int(value: int, max_digits: int = DISPLAY_MAX_DIGITS) -> str:
    """
    Format an exact integer for display.

    Args:
        value: Integer to format
        max_digits: Longest value printed in full

    Returns:
        The decimal string, or "≈ 10^k" when it has more than max_digits digits
    """
    if value is None:
        return "N/A"
    digits = decimal_digits(value)
    if digits <= max_digits:
        return str(value)
    sign = "-" if value < 0 else ""
    return f"{sign}≈ 10^{digits - 1}"


def format_log10(value: Fraction) -> str:
    """Display an upward-rounded log10 value, e.g. '≤ 10^(6.322e+21)'."""
    if value is None:
        return "N/A"
    as_float = float(value)
    if abs(as_float) < 1e6:
        return f"≤ 10^{ceil(value * 1000) / 1000:.3f}"
    return f"≤ 10^({as_float:.6e})"


def ceil_rational(value: Fraction, places: int = 6) -> Fraction:
    """Smallest multiple of 10^-places that is >= value."""
    scale = 10 ** places
    return Fraction(ceil(Fraction(value) * scale), scale)


def format_valuation(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float) and isinf(v):
        return "inf"
    return str(v)


def format_points(points: Iterable) -> str:
    """'{0, 1, inf}' style listing in the given order."""
    return "{" + ", ".join(str(P) for P in points) + "}"


def format_primes(primes: Iterable[int]) -> str:
    primes = list(primes)
    if not primes:
        return "{}"
    return "{" + ", ".join(str(p) for p in primes) + "}"
