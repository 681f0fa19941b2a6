"""Exact big-integer combinatorics and the analytic bounds used in reports.

Counting paths (partition numbers, multinomials) are exact integers or
rationals throughout; only the Chernoff and Robbins estimates return
floats, since they feed reports rather than theorems.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

_stirling_cache: dict[tuple[int, int, int], int] = {}
_stirling_lock = threading.Lock()


def stirling_r_assoc(n: int, m: int, r: int) -> int:
    """Partitions of an n-set into m blocks, each of size at least r.

    Uses the recurrence counting by the block of the last element:
    S(n, m) = m * S(n-1, m) + C(n-1, r-1) * S(n-r, m-1),
    the first term when that block keeps size > r after removal, the
    second when it has exactly r elements.  Filled iteratively, no deep
    recursion.
    """
    if m < 1 or r < 0 or n < m * r:
        raise ValueError(f"need m >= 1, r >= 0 and n >= m*r, got {(n, m, r)}")
    if r == 0:
        # blocks of a set partition are nonempty regardless
        if n < m:
            return 0
        r = 1
    key = (n, m, r)
    with _stirling_lock:
        if key in _stirling_cache:
            return _stirling_cache[key]
        for mm in range(1, m + 1):
            for nn in range(mm * r, n + 1):
                cell = (nn, mm, r)
                if cell in _stirling_cache:
                    continue
                if mm == 1:
                    val = 1
                else:
                    prev = _stirling_cache[(nn - 1, mm, r)] if nn - 1 >= mm * r else 0
                    below = (
                        _stirling_cache[(nn - r, mm - 1, r)]
                        if nn - r >= (mm - 1) * r
                        else 0
                    )
                    val = mm * prev + math.comb(nn - 1, r - 1) * below
                _stirling_cache[cell] = val
        return _stirling_cache[key]


def multinomial(n: int, parts: list[int] | tuple[int, ...]) -> int:
    """Exact multinomial coefficient n! / (parts_1! ... parts_k!)."""
    if any(p < 0 for p in parts):
        raise ValueError(f"negative part in {parts}")
    if sum(parts) != n:
        raise ValueError(f"parts {parts} do not sum to {n}")
    out = math.factorial(n)
    for p in parts:
        out //= math.factorial(p)
    return out


@dataclass(frozen=True)
class BoundPair:
    """A two-sided estimate, lower <= upper."""

    lower: Fraction | float
    upper: Fraction | float

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"lower {self.lower} > upper {self.upper}")

    def contains(self, value) -> bool:
        return self.lower <= value <= self.upper

    def contains_strictly(self, value) -> bool:
        return self.lower < value < self.upper


@dataclass(frozen=True)
class StirlingBoundsCheck:
    bounds: BoundPair
    value: int
    ok: bool


def check_stirling_bounds(n: int, m: int, r: int) -> StirlingBoundsCheck:
    """Verify m^n / m^(mr) <= S(n, m)_{>=r} <= m^n / m! with exact rationals."""
    if m < 1 or n < m * r:
        raise ValueError(f"need m >= 1 and n >= m*r, got {(n, m, r)}")
    bounds = BoundPair(
        Fraction(m**n, m ** (m * r)), Fraction(m**n, math.factorial(m))
    )
    value = stirling_r_assoc(n, m, r)
    return StirlingBoundsCheck(bounds, value, bounds.contains(value))


@dataclass(frozen=True)
class GrowthBoundCheck:
    value: int
    bound: Fraction
    ok: bool


def check_growth_bound(n: int, m: int, r: int) -> GrowthBoundCheck:
    """Verify S(n, m)_{>=r} <= (m^(mr+1) / m!) * S(n-1, m)_{>=r} exactly."""
    if m < 1 or n < m * r + 1:
        raise ValueError(f"need m >= 1 and n >= m*r + 1, got {(n, m, r)}")
    value = stirling_r_assoc(n, m, r)
    bound = Fraction(m ** (m * r + 1), math.factorial(m)) * stirling_r_assoc(
        n - 1, m, r
    )
    return GrowthBoundCheck(value, bound, value <= bound)


def chernoff_lower(n: int, p, delta: float) -> float:
    """Lower-tail bound: Pr[X <= (1-delta)np] <= exp(-delta^2 np / 2)."""
    _check_chernoff_args(n, p, delta)
    return math.exp(-(delta**2) * n * float(p) / 2.0)


def chernoff_upper(n: int, p, delta: float) -> float:
    """Upper-tail bound: Pr[X >= (1+delta)np] <= exp(-delta^2 np / (2+delta))."""
    _check_chernoff_args(n, p, delta)
    return math.exp(-(delta**2) * n * float(p) / (2.0 + delta))


def _check_chernoff_args(n, p, delta):
    if n < 0 or delta < 0 or not 0 < float(p) <= 1:
        raise ValueError(f"bad Chernoff arguments {(n, p, delta)}")


def robbins_bounds(n: int) -> BoundPair:
    """Robbins' form of Stirling's approximation; n! lies strictly inside."""
    if n < 1:
        raise ValueError("n must be positive")
    base = math.sqrt(2 * math.pi * n) * (n / math.e) ** n
    return BoundPair(
        base * math.exp(1.0 / (12 * n + 1)), base * math.exp(1.0 / (12 * n))
    )
