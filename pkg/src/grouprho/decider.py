"""Two-process semi-decision of word triviality.

Process A searches for the word among enumerated trivial words (sound
witness of triviality).  Process B squeezes spectral radii: an upper
envelope for the presented group against a lower envelope for the quotient
by the word.  If the word were trivial the quotient would be the same
marked group, so a certified strict gap proves nontriviality.

Termination relies on an outside promise — that the normal closure of a
nontrivial input is non-amenable, which keeps the two radii apart.  The
promise is recorded, not checked; without it the procedure is still sound,
it may just never answer.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .bounds import Comparison, RootBound, compare, rho_lower, rho_upper, root_bound_json
from .cayley import WalkCache, free_radial_p
from .dehn import DehnStrategy, FreeGroupStrategy
from .enumeration import TrivialWordStream
from .presentation import (
    Presentation,
    canonical_relator_class,
    check_small_cancellation,
)
from .words import Word, format_word, free_reduce

__all__ = [
    "Verdict",
    "Promise",
    "DecisionOutcome",
    "decide_trivial",
    "interleave_schedule",
    "quotient_by",
]

DEFAULT_QUANTUM = 64


class Verdict(enum.Enum):
    TRIVIAL = "trivial"
    NONTRIVIAL = "nontrivial"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class Promise:
    """Caller's declaration that the normal closure of the queried word is
    non-amenable whenever the word is nontrivial.  Unverifiable here; it is
    carried into the outcome for the record."""

    declared: bool = False
    note: str = ""


@dataclass(frozen=True)
class DecisionOutcome:
    verdict: Verdict
    promise: Promise
    rounds_used: int
    #: TRIVIAL: 1-based index of the emitted witness (0 = freely trivial)
    witness_index: Optional[int] = None
    witness: Optional[Word] = None
    #: NONTRIVIAL: (k, upper bound for the group, lower bound for the quotient)
    certificate: Optional[Tuple[int, RootBound, RootBound]] = None
    budget: Optional[int] = None

    def to_json(self) -> dict:
        blob: dict = {
            "verdict": self.verdict.value,
            "promise_declared": self.promise.declared,
            "rounds_used": self.rounds_used,
        }
        if self.verdict is Verdict.TRIVIAL:
            blob["witness_index"] = self.witness_index
            blob["witness"] = format_word(self.witness or ())
        elif self.verdict is Verdict.NONTRIVIAL:
            k, x_k, y_k = self.certificate
            blob["certificate"] = {
                "k": k,
                "group_upper": root_bound_json(x_k),
                "quotient_lower": root_bound_json(y_k),
            }
        else:
            blob["budget"] = self.budget
        return blob


def interleave_schedule(budget: int) -> List[str]:
    """Deterministic round-robin trace: A, B, A, B, ... of length budget."""
    if budget < 0:
        raise ValueError("budget must be >= 0")
    return ["A" if i % 2 == 0 else "B" for i in range(budget)]


def quotient_by(presentation: Presentation, word: Word) -> Presentation:
    """The marked quotient obtained by killing the word.

    The word joins the relator list unless its symmetrized class is already
    present (re-killing a relator changes nothing).
    """
    w = free_reduce(word)
    if not w:
        return presentation
    existing = {canonical_relator_class(r) for r in presentation.relators}
    if canonical_relator_class(w) in existing:
        return presentation
    name = f"{presentation.name}-quot" if presentation.name else "quotient"
    return Presentation(
        presentation.n_generators, presentation.relators + (w,), name=name
    )


class _UpperPipeline:
    """Nonincreasing certified upper bounds for the presented group's
    spectral radius, advanced one return-probability order per call."""

    def __init__(self, presentation: Presentation):
        self.presentation = presentation
        if presentation.relators:
            self._cache = WalkCache(DehnStrategy(presentation))
            self._radial_rank = None
        else:
            self._cache = None
            self._radial_rank = presentation.n_generators
        self.best: Optional[RootBound] = None

    def advance(self, k: int) -> RootBound:
        if self._radial_rank is not None:
            p2k = free_radial_p(self._radial_rank, 2 * k)
        else:
            p2k = self._cache.p(2 * k)
        cand = rho_upper(p2k, k)
        if self.best is None or compare(cand, self.best) is Comparison.LESS:
            self.best = cand
        return self.best


class _LowerPipeline:
    """Nondecreasing certified lower bounds for the quotient's spectral
    radius: exact return probabilities when the quotient is decidable via
    small cancellation, trivial-word counting otherwise."""

    def __init__(self, quotient: Presentation, quantum: int):
        self.quotient = quotient
        self.quantum = quantum
        self.exact = check_small_cancellation(quotient).passes
        if self.exact:
            strategy = (
                DehnStrategy(quotient)
                if quotient.relators
                else FreeGroupStrategy(quotient.n_generators)
            )
            self._cache = WalkCache(strategy)
        else:
            self._stream = TrivialWordStream(quotient)
            self._counts: Dict[int, int] = {}
            self._consumed = 0
        self.best: Optional[RootBound] = None

    def _raise_to(self, cand: RootBound) -> RootBound:
        if self.best is None or compare(cand, self.best) is Comparison.GREATER:
            self.best = cand
        return self.best

    def advance(self, k: int) -> RootBound:
        if self.exact:
            return self._raise_to(rho_lower(self._cache.p(2 * k), k))
        for _ in range(self.quantum):
            w = self._stream.next_trivial()
            self._counts[len(w)] = self._counts.get(len(w), 0) + 1
            self._consumed += 1
        size = 2 * self.quotient.n_generators
        best = RootBound(Fraction(0), 1)
        for n, c in self._counts.items():
            if 1 <= n <= self._consumed:
                cand = RootBound(Fraction(c, size**n), n)
                if compare(cand, best) is Comparison.GREATER:
                    best = cand
        return self._raise_to(best)


def decide_trivial(
    presentation: Presentation,
    word: Word,
    budget: int,
    promise: Promise = Promise(),
    *,
    quantum: int = DEFAULT_QUANTUM,
) -> DecisionOutcome:
    """Semi-decide whether the word represents the identity.

    The presentation must satisfy C'(1/6) so that its spectral radius is
    upper-approximable from return probabilities.  The budget counts
    alternating rounds: A-rounds consume one enumerated trivial word each,
    B-rounds advance both spectral envelopes by one order and compare.

    Sound in both directions; termination within budget is not guaranteed
    (and impossible to guarantee: a verdict may need radii the budget
    cannot reach).
    """
    report = check_small_cancellation(presentation)
    if not report.passes:
        raise ValueError(
            "decision procedure requires a C'(1/6) presentation; "
            f"worst relator ratio {report.worst_ratio}"
        )
    target = free_reduce(word)
    if any(abs(c) > presentation.n_generators for c in target):
        raise ValueError("word uses letters outside the presentation alphabet")
    if not target:
        return DecisionOutcome(
            Verdict.TRIVIAL, promise, 0, witness_index=0, witness=()
        )

    stream = TrivialWordStream(presentation)
    upper = _UpperPipeline(presentation)
    lower = _LowerPipeline(quotient_by(presentation, target), quantum)
    a_steps = 0
    b_steps = 0
    for step, label in enumerate(interleave_schedule(budget), start=1):
        if label == "A":
            a_steps += 1
            emitted = stream.next_trivial()
            if free_reduce(emitted) == target:
                return DecisionOutcome(
                    Verdict.TRIVIAL,
                    promise,
                    step,
                    witness_index=a_steps,
                    witness=emitted,
                )
        else:
            b_steps += 1
            x_k = upper.advance(b_steps)
            y_k = lower.advance(b_steps)
            if compare(x_k, y_k) is Comparison.LESS:
                return DecisionOutcome(
                    Verdict.NONTRIVIAL,
                    promise,
                    step,
                    certificate=(b_steps, x_k, y_k),
                )
    return DecisionOutcome(Verdict.UNDECIDED, promise, budget, budget=budget)
