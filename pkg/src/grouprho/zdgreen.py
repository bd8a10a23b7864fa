"""Certified evaluation of the lattice Green function at 1 for Z^d marked
with the cube generating set {-1,+1}^d, and of the derived spectral radius.

The cube walk factors into d independent one-dimensional +-1 walks, so the
return probability after 2n steps is (C(2n,n)/4^n)^d exactly.  For d >= 5
the series theta = sum_n p(2n) converges fast enough to evaluate with an
exact rational partial sum plus a rigorous tail majorant; the spectral
radius follows by the monotone transform rho = 1 - 1/(2 theta).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .intervals import RInterval, decimal_str, sqrt_fraction

__all__ = [
    "GreenEvaluation",
    "cube_p2n",
    "tail_bound",
    "theta",
    "rho_zd_cube",
    "central_binomial",
]

# Rational under-approximation of pi.  The tail majorant divides by
# pi^{d/2}, so substituting something smaller than pi only enlarges the
# bound: the direction is safe.
PI_LOWER = Fraction(157, 50)


def central_binomial(n: int) -> int:
    """C(2n, n) by the multiplicative recurrence, exact."""
    if n < 0:
        raise ValueError("n must be >= 0")
    c = 1
    for k in range(n):
        c = c * 2 * (2 * k + 1) // (k + 1)
    return c


def cube_p2n(d: int, n: int) -> Fraction:
    """Return probability after 2n steps: (C(2n,n)/4^n)^d exactly."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if n < 0:
        raise ValueError("n must be >= 0")
    return Fraction(central_binomial(n), 4**n) ** d


def _pow_half_up(q: Fraction, k: int) -> Fraction:
    """q^{k/2} rounded up (q >= 0, k >= 0)."""
    if k % 2 == 0:
        return q ** (k // 2)
    return sqrt_fraction(q**k, "up")


def tail_bound(d: int, N: int) -> Fraction:
    """Rational upper bound on sum_{n>N} (C(2n,n)/4^n)^d.

    Term bound: C(2n,n)/4^n <= 1/sqrt(pi n), so t_n <= (pi n)^{-d/2};
    comparing the sum with the integral of x^{-d/2} gives
        sum_{n>N} (pi n)^{-d/2} <= pi^{-d/2} * (2/(d-2)) * N^{1-d/2}.
    pi is replaced by the smaller 157/50 and half-integer powers are
    rounded up, so every step preserves the upper-bound direction.
    """
    if d < 3:
        raise ValueError("tail bound needs d >= 3")
    if N < 1:
        raise ValueError("N must be >= 1")
    pi_part = _pow_half_up(1 / PI_LOWER, d)
    n_part = _pow_half_up(Fraction(1, N ** (d - 2)), 1) if d % 2 else Fraction(
        1, N ** ((d - 2) // 2)
    )
    return pi_part * Fraction(2, d - 2) * n_part


@dataclass(frozen=True)
class GreenEvaluation:
    """Certified enclosure of theta = sum_n p(2n) and of rho = 1 - 1/(2 theta)."""

    d: int
    N: int
    partial: Fraction
    tail_hi: Fraction
    theta_interval: RInterval
    rho_interval: RInterval

    def to_json(self, digits: int = 12) -> dict:
        return {
            "d": self.d,
            "N": self.N,
            "theta_lo": decimal_str(self.theta_interval.lo, digits, "down"),
            "theta_hi": decimal_str(self.theta_interval.hi, digits, "up"),
            "rho_lo": decimal_str(self.rho_interval.lo, digits, "down"),
            "rho_hi": decimal_str(self.rho_interval.hi, digits, "up"),
            "theta_width": decimal_str(self.theta_interval.width, digits, "up"),
            "rho_width": decimal_str(self.rho_interval.width, digits, "up"),
        }


def _partial_sum(d: int, N: int) -> Fraction:
    """sum_{n=0}^{N} (C(2n,n)/4^n)^d with one normalization at the end.

    The accumulator is kept as an integer numerator at scale 4^{dn}:
    each step shifts by 4^d and adds C(2n,n)^d, which itself advances by a
    small-factor multiply/exact-divide.  This keeps every step linear in
    the (large) operand size instead of re-normalizing fractions.
    """
    import gmpy2

    shift = gmpy2.mpz(4**d)
    cd = gmpy2.mpz(1)  # C(2n, n)^d
    num = gmpy2.mpz(1)  # running numerator at scale 4^{d n}
    for n in range(N):
        cd = cd * gmpy2.mpz((2 * (2 * n + 1)) ** d) // gmpy2.mpz((n + 1) ** d)
        num = num * shift + cd
    return Fraction(int(num), int(shift**N))


def theta(d: int, target_width) -> GreenEvaluation:
    """Enclose theta = G(1) for the cube walk on Z^d within target_width.

    Doubles the truncation until the tail majorant fits, then evaluates the
    partial sum exactly once at that truncation.
    """
    if d < 5:
        raise ValueError("the Green function evaluation requires d >= 5")
    target_width = Fraction(target_width)
    if target_width <= 0:
        raise ValueError("target width must be positive")
    N = 4
    while tail_bound(d, N) > target_width:
        N *= 2
    partial = _partial_sum(d, N)
    tail_hi = tail_bound(d, N)
    theta_iv = RInterval(partial, partial + tail_hi)
    rho_iv = RInterval(
        1 - Fraction(1, 2) / theta_iv.lo, 1 - Fraction(1, 2) / theta_iv.hi
    )
    return GreenEvaluation(d, N, partial, tail_hi, theta_iv, rho_iv)


def rho_zd_cube(d: int, target_width) -> RInterval:
    """Certified interval for rho(Z^d, cube) = 1 - 1/(2 theta).

    theta >= 1 makes the transform a contraction by at least 1/2, so the
    returned width is at most half the theta target width.
    """
    return theta(d, target_width).rho_interval
