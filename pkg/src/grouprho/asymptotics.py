"""Growth-rate and entropy reports.

Both quantities admit certified upper bounds from finite data: ball sizes
are sub-multiplicative and walk entropies sub-additive, so every finite
term beta(n)^{1/n} (resp. H(X_n)/n) bounds the limit from above.  Neither
admits a nontrivial certified lower bound here, and the reports say so.

The "approximation sequences" replay the same envelopes against the
union-find quotient data instead of the true ball: class counts over-count
elements and partition entropies over-state walk entropies, so those
envelopes are still upper bounds for the limit quantities, converging
downward as more word pairs are consumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .bounds import RootBound, root_min, root_bound_json
from .cayley import BallGraph, build_ball, walk_counts
from .dehn import WordProblemStrategy, strategy_for
from .enumeration import QuotientApprox, TrivialWordStream, delta_pairs
from .intervals import DEFAULT_PRECISION, EntropyExpr, RInterval
from .presentation import Presentation

__all__ = [
    "GrowthReport",
    "EntropyReport",
    "growth",
    "entropy",
    "walk_entropy_term",
    "growth_approx_sequence",
    "entropy_approx_sequence",
]

CERTIFICATION = "upper certified only"


def _resolve_strategy(presentation, strategy):
    return strategy if strategy is not None else strategy_for(presentation)


# ---------------------------------------------------------------------------
# Exact terms from ball data
# ---------------------------------------------------------------------------


def walk_entropy_term(table, n: int) -> EntropyExpr:
    """H(X_n) as an exact entropy expression over the step-n distribution."""
    sizes = [c for c in table.distribution(n) if c]
    return EntropyExpr(sizes)


@dataclass(frozen=True)
class GrowthReport:
    """Ball growth data with a certified upper envelope for the growth rate.

    ``approx_sequence`` holds the nonincreasing upper bounds derived from
    quotient class counts after successive refinement batches; it converges
    to the exact envelope when the underlying enumeration saturates.
    """

    exact: Tuple[Tuple[int, int], ...]
    upper_envelope: RootBound
    envelope_n: int
    approx_sequence: Tuple[RootBound, ...] = ()
    certification: str = CERTIFICATION

    def to_json(self) -> dict:
        return {
            "beta": [[n, b] for n, b in self.exact],
            "upper_envelope": root_bound_json(self.upper_envelope),
            "envelope_n": self.envelope_n,
            "approx_sequence": [root_bound_json(y) for y in self.approx_sequence],
            "certification": self.certification,
        }


@dataclass(frozen=True)
class EntropyReport:
    """Walk-entropy data with a certified upper envelope for the entropy
    rate (natural logarithm throughout)."""

    exact: Tuple[Tuple[int, RInterval], ...]
    upper_envelope: RInterval
    envelope_n: int
    approx_sequence: Tuple[RInterval, ...] = ()
    certification: str = CERTIFICATION

    def to_json(self) -> dict:
        def iv(x: RInterval):
            return {"lo": str(x.lo), "hi": str(x.hi)}

        return {
            "walk_entropy": [[n, iv(h)] for n, h in self.exact],
            "upper_envelope": iv(self.upper_envelope),
            "envelope_n": self.envelope_n,
            "approx_sequence": [iv(x) for x in self.approx_sequence],
            "certification": self.certification,
        }


# ---------------------------------------------------------------------------
# Refinement-driven approximation sequences
# ---------------------------------------------------------------------------


def _refinement_snapshots(
    presentation: Presentation,
    cap: int,
    terms: int,
    pairs_per_term: int,
):
    """Yield the quotient approximation after 0, 1, ..., terms batches."""
    approx = QuotientApprox(presentation.n_generators, max_len=cap)
    pairs = delta_pairs(TrivialWordStream(presentation))
    yield approx
    for _ in range(terms):
        approx.consume(pairs, pairs_per_term)
        yield approx


def growth_approx_sequence(
    presentation: Presentation,
    cap: int,
    terms: int,
    pairs_per_term: int = 500,
) -> Tuple[Tuple[RootBound, ...], QuotientApprox]:
    """Upper bounds min_{n<=cap} class_count(n)^{1/n} after each batch."""
    out: List[RootBound] = []
    approx = None
    for approx in _refinement_snapshots(presentation, cap, terms, pairs_per_term):
        bounds = [
            RootBound(Fraction(approx.class_count(n)), n) for n in range(1, cap + 1)
        ]
        out.append(root_min(bounds)[0])
    return tuple(out), approx


def entropy_approx_sequence(
    presentation: Presentation,
    cap: int,
    terms: int,
    pairs_per_term: int = 500,
    precision: int = DEFAULT_PRECISION,
) -> Tuple[Tuple[RInterval, ...], QuotientApprox]:
    """Upper bounds min_{n<=cap} H_k(n)/n after each batch, as intervals."""
    out: List[RInterval] = []
    approx = None
    for approx in _refinement_snapshots(presentation, cap, terms, pairs_per_term):
        candidates = [
            approx.entropy_upper_term(n).value_interval(precision).scale(Fraction(1, n))
            for n in range(1, cap + 1)
        ]
        out.append(min(candidates, key=lambda iv: iv.hi))
    return tuple(out), approx


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def growth(
    presentation: Presentation,
    strategy: Optional[WordProblemStrategy] = None,
    n_max: int = 6,
    *,
    approx_terms: int = 0,
    pairs_per_term: int = 500,
    approx_cap: Optional[int] = None,
    ball: Optional[BallGraph] = None,
) -> GrowthReport:
    """Exact beta(n) for n <= n_max plus the Fekete upper envelope
    min_n beta(n)^{1/n} for the growth rate."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    strategy = _resolve_strategy(presentation, strategy)
    if ball is None or ball.radius < n_max:
        ball = build_ball(strategy, n_max)
    exact = tuple((n, ball.beta(n)) for n in range(1, n_max + 1))
    bounds = [RootBound(Fraction(b), n) for n, b in exact]
    envelope, arg = root_min(bounds)
    approx_seq: Tuple[RootBound, ...] = ()
    if approx_terms > 0:
        cap = approx_cap if approx_cap is not None else min(n_max, 8)
        approx_seq, _ = growth_approx_sequence(
            presentation, cap, approx_terms, pairs_per_term
        )
    return GrowthReport(exact, envelope, exact[arg][0], approx_seq)


def entropy(
    presentation: Presentation,
    strategy: Optional[WordProblemStrategy] = None,
    n_max: int = 4,
    *,
    approx_terms: int = 0,
    pairs_per_term: int = 500,
    approx_cap: Optional[int] = None,
    precision: int = DEFAULT_PRECISION,
    ball: Optional[BallGraph] = None,
) -> EntropyReport:
    """Certified enclosures of H(X_n) for n <= n_max plus the sub-additive
    upper envelope min_n H(X_n)/n for the entropy rate.

    Full step-n distributions require a radius-n ball, which grows
    exponentially; keep n_max modest.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    strategy = _resolve_strategy(presentation, strategy)
    if ball is None or ball.radius < n_max:
        ball = build_ball(strategy, n_max)
    table = walk_counts(ball, n_max)
    exact: List[Tuple[int, RInterval]] = []
    scaled: List[RInterval] = []
    for n in range(1, n_max + 1):
        h = walk_entropy_term(table, n).value_interval(precision)
        exact.append((n, h))
        scaled.append(h.scale(Fraction(1, n)))
    arg = min(range(len(scaled)), key=lambda i: scaled[i].hi)
    approx_seq: Tuple[RInterval, ...] = ()
    if approx_terms > 0:
        cap = approx_cap if approx_cap is not None else min(n_max, 8)
        approx_seq, _ = entropy_approx_sequence(
            presentation, cap, approx_terms, pairs_per_term, precision
        )
    return EntropyReport(tuple(exact), scaled[arg], arg + 1, approx_seq)
