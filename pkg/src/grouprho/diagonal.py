"""Certified avoidance driver over a tower of small-cancellation quotients.

Given a list of computable real numbers (presented as monotone rational
enclosure sequences), repeatedly extend a family of relators (a^i b^i)^7 by
one index so that the certified spectral-radius interval of the resulting
two-generator group is provably disjoint from every target seen so far, each
with an explicit rational margin.  The search dovetails candidate index,
enclosure precision, and walk depth in a fixed diagonal order, so runs are
deterministic and every accepted step can be replayed bit-for-bit from the
recorded certificate data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, Optional, Sequence, Tuple, Union

from .bounds import CertifiedInterval, rho_interval, root_bound_json, to_decimal
from .cayley import WalkCache
from .dehn import DehnStrategy
from .intervals import RInterval
from .presentation import Presentation, check_small_cancellation
from .words import Word

__all__ = [
    "ComputableRealOracle",
    "DiagonalRun",
    "DiagonalState",
    "SeparationCertificate",
    "Undecided",
    "DEFAULT_GAP_DIGITS",
    "HARD_BAND",
    "diagonal_step",
    "family_presentation",
    "in_hard_band",
    "parse_target",
    "replay_certificate",
    "replay_state",
    "run_diagonal",
    "seventh_power_relator",
]

# Fractional digits used when rounding irrational interval endpoints outward
# to obtain a rational separation gap.  Fixed by default so that reruns of a
# recorded certificate reproduce the same gap exactly.
DEFAULT_GAP_DIGITS = 12

# Demo-scale honesty band: targets strictly inside this interval would need
# far deeper walks than a desk run affords, because the certified upper
# envelope carries the polynomial factor (10n+1)^(3/n) at walk depth n.
HARD_BAND = RInterval(Fraction(3, 5), Fraction(7, 5))


def in_hard_band(value: Fraction) -> bool:
    """True when a target lies strictly inside the impractical band."""
    q = Fraction(value)
    return HARD_BAND.lo < q < HARD_BAND.hi


# ---------------------------------------------------------------------------
# Target oracles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComputableRealOracle:
    """A real number given by monotone rational approximations.

    ``lower_at(m)`` is nondecreasing in m, ``upper_at(m)`` is nonincreasing,
    and ``lower_at(m) <= upper_at(m)`` always; both converge to the
    represented number.  Two built-in kinds cover the command line:

    - ``constant``: every enclosure is the single rational point ``value``.
    - ``decimal``:  the enclosure at index m is ``value +- 10**-m``.

    The driver only ever calls :meth:`enclosure`, so richer plugin oracles
    can be any object exposing the same method.
    """

    kind: str
    value: Fraction
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("constant", "decimal"):
            raise ValueError(f"unknown oracle kind {self.kind!r}")
        object.__setattr__(self, "value", Fraction(self.value))
        if not self.label:
            object.__setattr__(self, "label", str(self.value))

    @staticmethod
    def constant(value) -> "ComputableRealOracle":
        return ComputableRealOracle("constant", Fraction(value))

    @staticmethod
    def from_decimal(text: str) -> "ComputableRealOracle":
        text = text.strip()
        return ComputableRealOracle("decimal", Fraction(text), label=text)

    def lower_at(self, m: int) -> Fraction:
        if m < 0:
            raise ValueError("enclosure index must be >= 0")
        if self.kind == "constant":
            return self.value
        return self.value - Fraction(1, 10**m)

    def upper_at(self, m: int) -> Fraction:
        if m < 0:
            raise ValueError("enclosure index must be >= 0")
        if self.kind == "constant":
            return self.value
        return self.value + Fraction(1, 10**m)

    def enclosure(self, m: int) -> RInterval:
        return RInterval(self.lower_at(m), self.upper_at(m))


def parse_target(text: str) -> ComputableRealOracle:
    """Oracle from command-line text: 'p/q' is exact, otherwise decimal."""
    text = text.strip()
    if "/" in text:
        return ComputableRealOracle.constant(Fraction(text))
    return ComputableRealOracle.from_decimal(text)


# ---------------------------------------------------------------------------
# The relator tower
# ---------------------------------------------------------------------------


def seventh_power_relator(i: int) -> Word:
    """The cyclically reduced word (a^i b^i)^7, of length 14*i.

    Distinct members of the family share only short pieces (runs of a single
    letter have different lengths), so every finite subfamily satisfies the
    1/6 metric small-cancellation condition; the driver still re-verifies
    this for each candidate presentation rather than assuming it.
    """
    if i < 1:
        raise ValueError("relator index must be >= 1")
    block = (1,) * i + (2,) * i
    return block * 7


def family_presentation(indices: Sequence[int]) -> Presentation:
    """Two-generator presentation with relators (a^i b^i)^7 for each index."""
    idx = tuple(indices)
    if any(i < 1 for i in idx):
        raise ValueError("relator indices must be >= 1")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError("relator indices must be strictly increasing")
    name = "pow7-" + "-".join(str(i) for i in idx) if idx else "free-2"
    return Presentation(2, tuple(seventh_power_relator(i) for i in idx), name=name)


# ---------------------------------------------------------------------------
# Certificates and state
# ---------------------------------------------------------------------------


def _fraction_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _rational_gap(rho: CertifiedInterval, enclosure: RInterval, digits: int) -> Fraction:
    """Certified rational distance between a radius interval and an enclosure.

    The irrational radius endpoints are rounded *outward* to ``digits``
    decimal places, so a positive result proves the true intervals disjoint;
    overlapping intervals (or ones too close for the rounding to separate)
    yield 0.
    """
    hi_out = Fraction(to_decimal(rho.hi, digits, "up"))
    lo_out = Fraction(to_decimal(rho.lo, digits, "down"))
    gap = max(enclosure.lo - hi_out, lo_out - enclosure.hi)
    return gap if gap > 0 else Fraction(0)


@dataclass(frozen=True)
class SeparationCertificate:
    """Replayable evidence that one group avoids one target.

    Recomputing the radius interval for ``indices`` at walk depth ``n_max``
    and the target's enclosure at index ``oracle_index`` reproduces ``rho``,
    ``enclosure``, and hence the rational ``gap`` exactly.
    """

    target_index: int  # 1-based position in the target list
    indices: Tuple[int, ...]  # relator indices of the certified group
    n_max: int  # walk depth: p(2), ..., p(2*n_max) were used
    oracle_index: int  # enclosure index m
    rho: CertifiedInterval
    enclosure: RInterval
    gap: Fraction
    gap_digits: int = DEFAULT_GAP_DIGITS

    def __post_init__(self):
        if self.gap <= 0:
            raise ValueError("a separation certificate needs a positive gap")

    def to_json(self, digits: int = 12) -> dict:
        return {
            "target_index": self.target_index,
            "indices": list(self.indices),
            "n_max": self.n_max,
            "oracle_index": self.oracle_index,
            "rho_lo": root_bound_json(self.rho.lo, digits),
            "rho_hi": root_bound_json(self.rho.hi, digits),
            "clamped": self.rho.clamped,
            "enclosure_lo": _fraction_str(self.enclosure.lo),
            "enclosure_hi": _fraction_str(self.enclosure.hi),
            "gap": _fraction_str(self.gap),
            "gap_digits": self.gap_digits,
        }


@dataclass(frozen=True)
class DiagonalState:
    """Accepted relator indices with per-target margins and certificates.

    Invariant: for every j, the recorded radius interval of the *current*
    group and the j-th target's enclosure are disjoint with a rational gap
    strictly greater than ``epsilons[j]``.
    """

    indices: Tuple[int, ...] = ()
    epsilons: Tuple[Fraction, ...] = ()
    certificates: Tuple[SeparationCertificate, ...] = ()

    def __post_init__(self):
        k = len(self.indices)
        if len(self.epsilons) != k or len(self.certificates) != k:
            raise ValueError("indices, epsilons and certificates must align")
        if any(i < 1 for i in self.indices):
            raise ValueError("relator indices must be >= 1")
        if any(b <= a for a, b in zip(self.indices, self.indices[1:])):
            raise ValueError("relator indices must be strictly increasing")
        for j, (eps, cert) in enumerate(zip(self.epsilons, self.certificates), start=1):
            if eps <= 0:
                raise ValueError(f"margin {j} must be positive")
            if cert.target_index != j:
                raise ValueError(f"certificate {j} carries target index {cert.target_index}")
            if cert.indices != self.indices:
                raise ValueError(f"certificate {j} was issued for different indices")
            if cert.gap <= eps:
                raise ValueError(f"certificate {j} gap does not exceed its margin")

    @property
    def k(self) -> int:
        return len(self.indices)

    @property
    def last_index(self) -> int:
        return self.indices[-1] if self.indices else 0

    def to_json(self, digits: int = 12) -> dict:
        return {
            "indices": list(self.indices),
            "epsilons": [_fraction_str(e) for e in self.epsilons],
            "certificates": [c.to_json(digits) for c in self.certificates],
        }


@dataclass(frozen=True)
class Undecided:
    """The dovetail budget ran out before any candidate certified."""

    budget: int


# ---------------------------------------------------------------------------
# The dovetailed search
# ---------------------------------------------------------------------------


def _dovetail_triples(first_candidate: int) -> Iterator[Tuple[int, int, int]]:
    """All (candidate index, enclosure index, walk depth) triples.

    Fixed diagonal order by total weight, candidates first within a weight
    class, so the enumeration is deterministic and the lowest viable
    candidate index wins among certificates of equal cost.
    """
    weight = 3
    while True:
        for offset in range(1, weight - 1):
            candidate = first_candidate + offset - 1
            for m in range(1, weight - offset):
                yield candidate, m, weight - offset - m
        weight += 1


_CacheEntry = Optional[Tuple[Presentation, WalkCache]]


def diagonal_step(
    state: DiagonalState,
    targets: Sequence[ComputableRealOracle],
    budget: int,
    *,
    gap_digits: int = DEFAULT_GAP_DIGITS,
) -> Union[DiagonalState, Undecided]:
    """Extend the tower by one index certified against one more target.

    Dovetails over (candidate, enclosure index, walk depth); a candidate is
    accepted when its clamped certified radius interval clears every earlier
    target by more than its recorded margin *and* is disjoint from the new
    target.  The new margin is half the realized gap to the new target.
    ``budget`` caps how many dovetail triples are examined.
    """
    k = state.k
    if len(targets) < k + 1:
        raise ValueError(f"need at least {k + 1} targets, got {len(targets)}")
    if budget < 0:
        raise ValueError("budget must be >= 0")

    caches: Dict[int, _CacheEntry] = {}
    used = 0
    for candidate, m, n in _dovetail_triples(state.last_index + 1):
        if used >= budget:
            return Undecided(budget)
        used += 1

        if candidate not in caches:
            pres = family_presentation(state.indices + (candidate,))
            if check_small_cancellation(pres).passes:
                caches[candidate] = (pres, WalkCache(DehnStrategy(pres)))
            else:
                caches[candidate] = None
        entry = caches[candidate]
        if entry is None:
            continue
        pres, cache = entry

        rho = rho_interval(pres, cache.strategy, n, clamp_trivial=True, walk_cache=cache)
        accepted = []
        for j in range(k + 1):
            enc = targets[j].enclosure(m)
            gap = _rational_gap(rho, enc, gap_digits)
            required = state.epsilons[j] if j < k else Fraction(0)
            if gap <= required:
                accepted = []
                break
            accepted.append((enc, gap))
        if not accepted:
            continue

        new_indices = state.indices + (candidate,)
        new_eps = accepted[k][1] / 2
        certificates = tuple(
            SeparationCertificate(
                target_index=j + 1,
                indices=new_indices,
                n_max=n,
                oracle_index=m,
                rho=rho,
                enclosure=enc,
                gap=gap,
                gap_digits=gap_digits,
            )
            for j, (enc, gap) in enumerate(accepted)
        )
        return DiagonalState(new_indices, state.epsilons + (new_eps,), certificates)

    raise AssertionError("unreachable: the dovetail enumeration is infinite")


# ---------------------------------------------------------------------------
# Replay and multi-step driver
# ---------------------------------------------------------------------------


def replay_certificate(
    cert: SeparationCertificate, targets: Sequence[ComputableRealOracle]
) -> bool:
    """Recompute a certificate's evidence from scratch and compare exactly."""
    pres = family_presentation(cert.indices)
    if not check_small_cancellation(pres).passes:
        return False
    rho = rho_interval(pres, DehnStrategy(pres), cert.n_max, clamp_trivial=True)
    enclosure = targets[cert.target_index - 1].enclosure(cert.oracle_index)
    gap = _rational_gap(rho, enclosure, cert.gap_digits)
    return (
        rho == cert.rho
        and enclosure == cert.enclosure
        and gap == cert.gap
        and gap > 0
    )


def replay_state(state: DiagonalState, targets: Sequence[ComputableRealOracle]) -> bool:
    """Replay every certificate of a state (margins are checked on build)."""
    return all(replay_certificate(c, targets) for c in state.certificates)


@dataclass(frozen=True)
class DiagonalRun:
    """Outcome of several driver steps: the last state reached and, when a
    step exhausted its budget, the honest leftover."""

    state: DiagonalState
    steps_completed: int
    undecided: Optional[Undecided] = None

    def to_json(self, digits: int = 12) -> dict:
        out = {
            "steps_completed": self.steps_completed,
            **self.state.to_json(digits),
        }
        if self.undecided is not None:
            out["undecided_budget"] = self.undecided.budget
        return out


def run_diagonal(
    targets: Sequence[ComputableRealOracle],
    steps: int,
    budget_per_step: int,
    *,
    gap_digits: int = DEFAULT_GAP_DIGITS,
) -> DiagonalRun:
    """Run ``steps`` extension steps from the empty state."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if steps > len(targets):
        raise ValueError(f"{steps} steps need {steps} targets, got {len(targets)}")
    state = DiagonalState()
    for done in range(steps):
        outcome = diagonal_step(state, targets, budget_per_step, gap_digits=gap_digits)
        if isinstance(outcome, Undecided):
            return DiagonalRun(state, done, outcome)
        state = outcome
    return DiagonalRun(state, steps)
