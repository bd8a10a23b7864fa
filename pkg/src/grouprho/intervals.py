"""Outward-rounded interval arithmetic over exact rational endpoints.

Transcendental quantities (logarithms, entropies) are never stored as
floats: they are evaluated through MPFR with directed rounding and the
directed results converted back to exact dyadic rationals, so every
interval endpoint is a Fraction and every containment claim is a theorem
about exact numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence, Tuple

import gmpy2

__all__ = [
    "RInterval",
    "EntropyExpr",
    "log_interval",
    "sqrt_fraction",
    "mpfr_to_fraction",
    "DEFAULT_PRECISION",
]

DEFAULT_PRECISION = 128


def mpfr_to_fraction(x) -> Fraction:
    """Exact conversion; every finite MPFR value is a dyadic rational."""
    q = gmpy2.mpq(x)
    return Fraction(int(q.numerator), int(q.denominator))


def _directed_log(q: Fraction, rounding, precision: int) -> Fraction:
    with gmpy2.context(precision=precision, round=rounding):
        val = gmpy2.log(gmpy2.mpfr(gmpy2.mpq(q.numerator, q.denominator)))
    return mpfr_to_fraction(val)


def log_interval(q: Fraction, precision: int = DEFAULT_PRECISION) -> "RInterval":
    """Enclosure of ln(q) with outward rounding."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("log_interval requires a positive rational")
    if q == 1:
        return RInterval(Fraction(0), Fraction(0))
    return RInterval(
        _directed_log(q, gmpy2.RoundDown, precision),
        _directed_log(q, gmpy2.RoundUp, precision),
    )


def sqrt_fraction(q: Fraction, direction: str) -> Fraction:
    """Directed rational square-root bound: 'down' never exceeds sqrt(q),
    'up' never falls below it.  Exact when q is a perfect square."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    a, b = q.numerator, q.denominator
    s = isqrt(a * b)
    if direction == "down":
        return Fraction(s, b)
    if direction == "up":
        return Fraction(s, b) if s * s == a * b else Fraction(s + 1, b)
    raise ValueError("direction must be 'down' or 'up'")


@dataclass(frozen=True)
class RInterval:
    """Closed interval [lo, hi] with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(q) -> "RInterval":
        q = Fraction(q)
        return RInterval(q, q)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __add__(self, other: "RInterval") -> "RInterval":
        return RInterval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "RInterval") -> "RInterval":
        return RInterval(self.lo - other.hi, self.hi - other.lo)

    def __neg__(self) -> "RInterval":
        return RInterval(-self.hi, -self.lo)

    def scale(self, c) -> "RInterval":
        c = Fraction(c)
        if c >= 0:
            return RInterval(self.lo * c, self.hi * c)
        return RInterval(self.hi * c, self.lo * c)

    def hull(self, other: "RInterval") -> "RInterval":
        return RInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def contains(self, q) -> bool:
        q = Fraction(q)
        return self.lo <= q <= self.hi

    def encloses(self, other: "RInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def strictly_below(self, other: "RInterval") -> bool:
        """Certified: every point of self < every point of other."""
        return self.hi < other.lo

    def separated_from(self, other: "RInterval") -> bool:
        return self.hi < other.lo or other.hi < self.lo

    def overlaps(self, other: "RInterval") -> bool:
        return not self.separated_from(other)

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __str__(self):
        return f"[{float(self.lo):.12g}, {float(self.hi):.12g}]"


def sum_intervals(items: Iterable[RInterval]) -> RInterval:
    total = RInterval.point(0)
    for it in items:
        total = total + it
    return total


def decimal_str(q, digits: int, direction: str) -> str:
    """Decimal rendering of a rational with directed rounding.

    ``direction`` is "down" (result <= q) or "up" (result >= q); the result
    has exactly ``digits`` places after the point.
    """
    q = Fraction(q)
    if digits < 0:
        raise ValueError("digits must be >= 0")
    if direction not in ("down", "up"):
        raise ValueError("direction must be 'down' or 'up'")
    scaled = q * 10**digits
    n, d = scaled.numerator, scaled.denominator
    units = n // d if direction == "down" else -((-n) // d)
    sign = "-" if units < 0 else ""
    units = abs(units)
    if digits == 0:
        return f"{sign}{units}"
    text = str(units).rjust(digits + 1, "0")
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


class EntropyExpr:
    """Exact Shannon-entropy expression of a partition of T equally likely
    outcomes into blocks of the given sizes:

        H = log T - (1/T) * sum_i c_i log c_i        (natural log)

    The sizes are kept as an exact sorted tuple, so two expressions can be
    compared for literal equality (same partition shape) without evaluating
    any logarithm; numeric questions go through value_interval().
    """

    __slots__ = ("total", "sizes")

    def __init__(self, sizes: Sequence[int], total: int = 0):
        sizes = tuple(sorted(int(c) for c in sizes if c))
        if any(c < 0 for c in sizes):
            raise ValueError("negative block size")
        self.sizes: Tuple[int, ...] = sizes
        self.total = int(total) if total else sum(sizes)
        if self.total != sum(sizes):
            raise ValueError("block sizes do not sum to the stated total")
        if self.total <= 0:
            raise ValueError("empty partition")

    def __eq__(self, other):
        return (
            isinstance(other, EntropyExpr)
            and self.total == other.total
            and self.sizes == other.sizes
        )

    def __hash__(self):
        return hash((self.total, self.sizes))

    def n_blocks(self) -> int:
        return len(self.sizes)

    def value_interval(self, precision: int = DEFAULT_PRECISION) -> RInterval:
        T = self.total
        if len(self.sizes) == 1:
            # point mass: the two log terms cancel identically
            return RInterval.point(0)
        acc = RInterval.point(0)
        for c in self.sizes:
            if c > 1:
                acc = acc + log_interval(Fraction(c), precision).scale(c)
        return log_interval(Fraction(T), precision) - acc.scale(Fraction(1, T))

    def __repr__(self):
        head = ",".join(map(str, self.sizes[:6]))
        tail = ",..." if len(self.sizes) > 6 else ""
        return f"EntropyExpr(total={self.total}, sizes=[{head}{tail}])"
