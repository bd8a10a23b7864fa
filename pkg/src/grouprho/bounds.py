"""Exact algebraic bound values q^{1/m} and certified spectral-radius
intervals.

Every bound that leaves this module is an exact object: a gcd-reduced
nonnegative rational q together with a minimal root index m.  Comparisons
are decided exactly — a fast outward-interval ladder handles the routine
cases and integer cross-powering settles anything the ladder cannot
separate — so envelope maxima/minima and all certificate orderings are
theorems, not float observations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, List, Optional, Sequence, Tuple

import gmpy2

from .cayley import WalkCache
from .dehn import WordProblemStrategy
from .intervals import RInterval, mpfr_to_fraction
from .presentation import Presentation, check_small_cancellation

__all__ = [
    "Comparison",
    "RootBound",
    "CertifiedInterval",
    "compare",
    "divide",
    "rho_lower",
    "rho_upper",
    "rho_interval",
    "to_decimal",
    "root_bound_json",
    "lower_envelope",
    "upper_envelope",
    "ONE",
]

_PRECISION_LADDER = (128, 256, 512, 1024, 4096)


class Comparison(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def _largest_power_divisor(q: Fraction, m: int) -> int:
    """Largest d | m with q an exact d-th rational power."""
    for d in range(m, 1, -1):
        if m % d:
            continue
        rn, en = gmpy2.iroot(gmpy2.mpz(q.numerator), d)
        if not en:
            continue
        rd, ed = gmpy2.iroot(gmpy2.mpz(q.denominator), d)
        if ed:
            return d
    return 1


@dataclass(frozen=True)
class RootBound:
    """The real number q**(1/m), canonicalized so that equal values have
    equal representations (q gcd-reduced, m minimal)."""

    q: Fraction
    m: int = 1

    def __post_init__(self):
        q = Fraction(self.q)
        m = int(self.m)
        if q < 0:
            raise ValueError("negative radicand")
        if m < 1:
            raise ValueError("root index must be positive")
        if q == 0 or q == 1:
            m = 1
        elif m > 1:
            d = _largest_power_divisor(q, m)
            if d > 1:
                num = int(gmpy2.iroot(gmpy2.mpz(q.numerator), d)[0])
                den = int(gmpy2.iroot(gmpy2.mpz(q.denominator), d)[0])
                q = Fraction(num, den)
                m //= d
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "m", m)

    def interval(self, precision: int = 128) -> RInterval:
        """Outward enclosure of the value at the given MPFR precision."""
        lo = _directed_root(self.q, self.m, gmpy2.RoundDown, precision)
        hi = _directed_root(self.q, self.m, gmpy2.RoundUp, precision)
        return RInterval(lo, hi)

    def __float__(self):
        return float(self.q) ** (1.0 / self.m)

    def __str__(self):
        if self.m == 1:
            return str(self.q)
        return f"({self.q})^(1/{self.m})"


ONE = RootBound(Fraction(1), 1)


def _directed_root(q: Fraction, m: int, rounding, precision: int) -> Fraction:
    with gmpy2.context(precision=precision, round=rounding):
        x = gmpy2.mpfr(gmpy2.mpq(q.numerator, q.denominator))
        val = gmpy2.rootn(x, m) if m > 1 else x
    return mpfr_to_fraction(val)


def compare(a: RootBound, b: RootBound) -> Comparison:
    """Total order on values.  Canonical forms make Equal a structural
    check; distinct values are separated by the interval ladder or, as the
    final authority, by exact integer cross-powering."""
    if a.q == b.q and a.m == b.m:
        return Comparison.EQUAL
    for prec in _PRECISION_LADDER:
        ia, ib = a.interval(prec), b.interval(prec)
        if ia.hi < ib.lo:
            return Comparison.LESS
        if ib.hi < ia.lo:
            return Comparison.GREATER
    L = lcm(a.m, b.m)
    va = a.q ** (L // a.m)
    vb = b.q ** (L // b.m)
    if va < vb:
        return Comparison.LESS
    if va > vb:
        return Comparison.GREATER
    return Comparison.EQUAL  # unreachable for canonical inputs


def divide(a: RootBound, b: RootBound) -> RootBound:
    """Exact quotient a/b as a RootBound."""
    if b.q == 0:
        raise ZeroDivisionError("division by zero bound")
    L = lcm(a.m, b.m)
    return RootBound(a.q ** (L // a.m) / b.q ** (L // b.m), L)


def root_max(bounds: Sequence[RootBound]) -> Tuple[RootBound, int]:
    best, arg = bounds[0], 0
    for i, b in enumerate(bounds[1:], start=1):
        if compare(b, best) is Comparison.GREATER:
            best, arg = b, i
    return best, arg


def root_min(bounds: Sequence[RootBound]) -> Tuple[RootBound, int]:
    best, arg = bounds[0], 0
    for i, b in enumerate(bounds[1:], start=1):
        if compare(b, best) is Comparison.LESS:
            best, arg = b, i
    return best, arg


# ---------------------------------------------------------------------------
# Spectral-radius bounds from return probabilities
# ---------------------------------------------------------------------------


def rho_lower(p2n: Fraction, n: int) -> RootBound:
    """p(2n)^{1/2n} never exceeds the spectral radius."""
    if n < 1:
        raise ValueError("n must be >= 1")
    p2n = Fraction(p2n)
    if not 0 <= p2n <= 1:
        raise ValueError("p(2n) must lie in [0, 1]")
    return RootBound(p2n, 2 * n)


def rho_upper(p2n: Fraction, n: int) -> RootBound:
    """((10n+1)^6 * p(2n))^{1/2n}: the return probability captures the
    spectral radius up to the polynomial factor valid under C'(1/6)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    p2n = Fraction(p2n)
    if not 0 <= p2n <= 1:
        raise ValueError("p(2n) must lie in [0, 1]")
    return RootBound(Fraction((10 * n + 1) ** 6) * p2n, 2 * n)


def lower_envelope(values: Iterable[Tuple[int, Fraction]]) -> Tuple[RootBound, int]:
    """max_n p(2n)^{1/2n} over the supplied (n, p(2n)) pairs."""
    pairs = list(values)
    if not pairs:
        raise ValueError("no values supplied")
    bounds = [rho_lower(p, n) for n, p in pairs]
    best, arg = root_max(bounds)
    return best, pairs[arg][0]


def upper_envelope(values: Iterable[Tuple[int, Fraction]]) -> Tuple[RootBound, int]:
    """min_n ((10n+1)^6 p(2n))^{1/2n} over the supplied pairs."""
    pairs = list(values)
    if not pairs:
        raise ValueError("no values supplied")
    bounds = [rho_upper(p, n) for n, p in pairs]
    best, arg = root_min(bounds)
    return best, pairs[arg][0]


@dataclass(frozen=True)
class CertifiedInterval:
    """Two-sided enclosure of the spectral radius with its evidence."""

    lo: RootBound
    hi: RootBound
    witness: Tuple[Tuple[int, Fraction], ...]  # the (n, p(2n)) pairs used
    lo_n: int
    hi_n: int
    clamped: bool = False

    def __post_init__(self):
        if compare(self.lo, self.hi) is Comparison.GREATER:
            raise ValueError("lower bound exceeds upper bound")

    def contains_value_of(self, b: RootBound) -> bool:
        return (
            compare(self.lo, b) is not Comparison.GREATER
            and compare(b, self.hi) is not Comparison.GREATER
        )


def rho_interval(
    presentation: Presentation,
    strategy: WordProblemStrategy,
    n_max: int,
    clamp_trivial: bool = False,
    walk_cache: Optional[WalkCache] = None,
) -> CertifiedInterval:
    """Certified enclosure from exact p(2), ..., p(2*n_max).

    The polynomial upper bound requires the presentation to satisfy C'(1/6)
    (vacuous for free groups).  With ``clamp_trivial`` the a-priori bound
    rho <= 1 (p is a probability) caps the upper envelope; the raw envelope
    exceeds 1 until n is large, so drivers that need a sub-3/2 certificate
    at small n turn this on.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    report = check_small_cancellation(presentation)
    if not report.passes:
        raise ValueError(
            "upper bound requires a C'(1/6) presentation; check failed: " + str(report)
        )
    cache = walk_cache if walk_cache is not None else WalkCache(strategy)
    witness: List[Tuple[int, Fraction]] = [(n, cache.p(2 * n)) for n in range(1, n_max + 1)]
    lo, lo_n = lower_envelope(witness)
    hi, hi_n = upper_envelope(witness)
    clamped = False
    if clamp_trivial and compare(hi, ONE) is Comparison.GREATER:
        hi, hi_n, clamped = ONE, 0, True
    return CertifiedInterval(lo, hi, tuple(witness), lo_n, hi_n, clamped)


# ---------------------------------------------------------------------------
# Decimal rendering
# ---------------------------------------------------------------------------


def to_decimal(b: RootBound, digits: int, direction: str) -> str:
    """Directed decimal string with exactly ``digits`` fractional digits.

    floor/ceil of q^{1/m} * 10^digits are computed by exact integer m-th
    root extraction; no floating point is involved.
    """
    if not 0 <= digits <= 50:
        raise ValueError("digits must be in [0, 50]")
    if direction not in ("down", "up"):
        raise ValueError("direction must be 'down' or 'up'")
    num, den = b.q.numerator, b.q.denominator
    scaled = num * 10 ** (digits * b.m) // den
    t = int(gmpy2.iroot(gmpy2.mpz(scaled), b.m)[0])
    if direction == "up":
        if t**b.m * den != num * 10 ** (digits * b.m):
            t += 1
    s = str(t)
    if digits == 0:
        return s
    s = s.rjust(digits + 1, "0")
    return s[:-digits] + "." + s[-digits:]


def root_bound_json(b: RootBound, digits: int = 12) -> dict:
    return {
        "q": f"{b.q.numerator}/{b.q.denominator}",
        "m": b.m,
        "decimal_down": to_decimal(b, digits, "down"),
        "decimal_up": to_decimal(b, digits, "up"),
    }
