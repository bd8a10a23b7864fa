"""Command-line front end with versioned, byte-stable JSON output.

Every subcommand prints one JSON document (or a flat text rendering) whose
top level carries ``"schema": "grouprho/1"``.  All content is derived
deterministically from the inputs and flags — no wall-clock data — so
identical invocations produce byte-identical output.

Exit codes: 0 on success, 2 for usage errors (bad flags, unreadable files,
malformed words), 3 for domain precondition violations (for example a
presentation that is not C'(1/6) handed to ``rho``).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .asymptotics import entropy as entropy_report
from .asymptotics import growth as growth_report
from .bounds import rho_interval, root_bound_json
from .cayley import build_ball
from .centroids import check_CR
from .decider import decide_trivial
from .dehn import strategy_for
from .diagonal import (
    DEFAULT_GAP_DIGITS,
    HARD_BAND,
    in_hard_band,
    parse_target,
    run_diagonal,
)
from .enumeration import lower_spectral_sequence
from .presentation import check_small_cancellation, load_presentation
from .words import WordSyntaxError, format_word, parse_word
from .zdgreen import theta

__all__ = ["RunConfig", "main"]

SCHEMA = "grouprho/1"
DEFAULT_RADIUS_CAP = 20


class UsageError(Exception):
    """Invalid flag combination or out-of-cap resource request."""


def _fraction_flag(text: str, flag: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{flag} expects a rational number: {exc}") from None


@dataclass(frozen=True)
class RunConfig:
    """Resolved global knobs shared by every subcommand."""

    subcommand: str
    path: Optional[str] = None
    out_format: str = "json"
    radius_cap: int = DEFAULT_RADIUS_CAP
    digits: int = 12
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.out_format not in ("json", "text"):
            raise UsageError(f"unknown output format {self.out_format!r}")
        if self.radius_cap < 1:
            raise UsageError("--radius-cap must be >= 1")
        if not 1 <= self.digits <= 50:
            raise UsageError("--digits must lie in [1, 50]")
        if self.threads < 1:
            raise UsageError("--threads must be >= 1")

    def check_radius(self, value: int, what: str) -> int:
        if value < 0:
            raise UsageError(f"{what} must be >= 0")
        if value > self.radius_cap:
            raise UsageError(
                f"{what} {value} exceeds the radius cap {self.radius_cap}; "
                "raise --radius-cap to override"
            )
        return value


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format",
        choices=("json", "text"),
        default="json",
        help="output format (default: json)",
    )
    common.add_argument(
        "--radius-cap",
        type=int,
        default=DEFAULT_RADIUS_CAP,
        metavar="R",
        help=f"refuse ball radii above this cap (default: {DEFAULT_RADIUS_CAP})",
    )
    common.add_argument(
        "--digits",
        type=int,
        default=12,
        metavar="D",
        help="decimal digits in rendered bounds (default: 12)",
    )
    common.add_argument(
        "--seed",
        type=int,
        default=0,
        metavar="N",
        help="seed for sampled demos; fixed default keeps runs reproducible",
    )
    common.add_argument(
        "--threads",
        type=int,
        default=1,
        metavar="N",
        help="accepted for interface stability; execution stays sequential",
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grouprho",
        description=(
            "Certified bounds on spectral radius, growth and entropy of "
            "finitely presented marked groups."
        ),
    )
    common = _common_flags()
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="COMMAND")

    p = sub.add_parser(
        "check", parents=[common], help="small-cancellation C'(lambda) report"
    )
    p.add_argument("presentation", help="presentation file (.grp)")
    p.add_argument(
        "--lam",
        default="1/6",
        metavar="Q",
        help="cancellation threshold as a fraction (default: 1/6)",
    )

    p = sub.add_parser(
        "wp", parents=[common], help="decide whether a word is trivial"
    )
    p.add_argument("word", help="word over the presentation's generators")
    p.add_argument("presentation", help="presentation file (.grp)")

    p = sub.add_parser(
        "rho", parents=[common], help="certified two-sided spectral radius bounds"
    )
    p.add_argument("presentation", help="presentation file (.grp)")
    p.add_argument("--n-max", type=int, default=4, metavar="N",
                   help="use return probabilities p(2), ..., p(2N) (default: 4)")
    p.add_argument("--clamp", action="store_true",
                   help="intersect the upper bound with the trivial bound 1")

    p = sub.add_parser(
        "growth", parents=[common], help="ball sizes and growth-rate upper envelope"
    )
    p.add_argument("presentation", help="presentation file (.grp)")
    p.add_argument("--n-max", type=int, default=6, metavar="N",
                   help="largest ball radius tabulated (default: 6)")
    p.add_argument("--approx-terms", type=int, default=0, metavar="K",
                   help="also report K quotient-refinement upper bounds")

    p = sub.add_parser(
        "entropy", parents=[common], help="walk entropies and entropy-rate envelope"
    )
    p.add_argument("presentation", help="presentation file (.grp)")
    p.add_argument("--n-max", type=int, default=4, metavar="N",
                   help="largest walk step tabulated (default: 4)")
    p.add_argument("--approx-terms", type=int, default=0, metavar="K",
                   help="also report K quotient-refinement upper bounds")

    p = sub.add_parser(
        "lower-seq",
        parents=[common],
        help="nondecreasing lower bounds from enumerated trivial words",
    )
    p.add_argument("presentation", help="presentation file (.grp)")
    p.add_argument("--k", type=int, default=20, metavar="K",
                   help="table rows: bounds after 1..K trivial words (default: 20)")

    p = sub.add_parser(
        "decide",
        parents=[common],
        help="two-process semi-decision of word triviality",
    )
    p.add_argument("word", help="word over the presentation's generators")
    p.add_argument("presentation", help="presentation file (.grp)")
    p.add_argument("--budget", type=int, default=10_000, metavar="B",
                   help="alternating-round budget (default: 10000)")

    p = sub.add_parser(
        "zd",
        parents=[common],
        help="Green-function value and spectral radius of the Z^d cube walk",
    )
    p.add_argument("--dim", type=int, required=True, metavar="D",
                   help="lattice dimension (requires D >= 5)")
    p.add_argument("--width", default="1e-6", metavar="W",
                   help="target enclosure width for theta (default: 1e-6)")

    p = sub.add_parser(
        "diagonal",
        parents=[common],
        help="avoidance driver separating rho from target reals",
    )
    p.add_argument("--targets", required=True, metavar="LIST",
                   help="comma-separated targets: decimals or fractions")
    p.add_argument("--steps", type=int, default=0, metavar="K",
                   help="diagonal steps to run (default: one per target)")
    p.add_argument("--budget-per-step", type=int, default=32, metavar="B",
                   help="dovetail triples allowed per step (default: 32)")

    p = sub.add_parser(
        "cr-check",
        parents=[common],
        help="exhaustive centroid-set property verification over a ball",
    )
    p.add_argument("presentation", help="presentation file (.grp)")
    p.add_argument("--radius", type=int, default=2, metavar="R",
                   help="quantify over all pairs/triples in this ball (default: 2)")

    return parser


# ---------------------------------------------------------------------------
# Subcommand handlers: each returns the payload dict (without the schema key)
# ---------------------------------------------------------------------------


def _cmd_check(args, cfg: RunConfig) -> dict:
    presentation = load_presentation(args.presentation)
    report = check_small_cancellation(presentation, _fraction_flag(args.lam, "--lam"))
    return {
        "command": "check",
        "presentation": presentation.name,
        "passes": report.passes,
        "lam": str(report.lam),
        "worst_ratio": str(report.worst_ratio),
        "worst_piece": format_word(report.worst_piece),
        "worst_relator": report.worst_relator,
        "max_piece_len": list(report.max_piece_len),
        "proper_powers": list(report.proper_power_flags),
    }


def _cmd_wp(args, cfg: RunConfig) -> dict:
    presentation = load_presentation(args.presentation)
    word = parse_word(args.word, presentation.n_generators)
    strategy = strategy_for(presentation)
    return {
        "command": "wp",
        "presentation": presentation.name,
        "word": format_word(word),
        "trivial": strategy.is_trivial(word),
        "strategy": strategy.describe(),
    }


def _cmd_rho(args, cfg: RunConfig) -> dict:
    presentation = load_presentation(args.presentation)
    n_max = cfg.check_radius(args.n_max, "--n-max")
    if n_max < 1:
        raise UsageError("--n-max must be >= 1")
    strategy = strategy_for(presentation)
    interval = rho_interval(presentation, strategy, n_max, clamp_trivial=args.clamp)
    return {
        "command": "rho",
        "presentation": presentation.name,
        "lo": root_bound_json(interval.lo, cfg.digits),
        "hi": root_bound_json(interval.hi, cfg.digits),
        "lo_n": interval.lo_n,
        "hi_n": interval.hi_n,
        "clamped": interval.clamped,
        "witness": [[n, str(p)] for n, p in interval.witness],
    }


def _cmd_growth(args, cfg: RunConfig) -> dict:
    presentation = load_presentation(args.presentation)
    n_max = cfg.check_radius(args.n_max, "--n-max")
    report = growth_report(presentation, n_max=n_max, approx_terms=args.approx_terms)
    return {
        "command": "growth",
        "presentation": presentation.name,
        **report.to_json(),
    }


def _cmd_entropy(args, cfg: RunConfig) -> dict:
    presentation = load_presentation(args.presentation)
    n_max = cfg.check_radius(args.n_max, "--n-max")
    report = entropy_report(presentation, n_max=n_max, approx_terms=args.approx_terms)
    return {
        "command": "entropy",
        "presentation": presentation.name,
        **report.to_json(),
    }


def _cmd_lower_seq(args, cfg: RunConfig) -> dict:
    presentation = load_presentation(args.presentation)
    if args.k < 1:
        raise UsageError("--k must be >= 1")
    rows = [
        [k, root_bound_json(lower_spectral_sequence(presentation, k), cfg.digits)]
        for k in range(1, args.k + 1)
    ]
    return {
        "command": "lower-seq",
        "presentation": presentation.name,
        "certification": "lower semi-computable; nondecreasing in k",
        "x": rows,
    }


def _cmd_decide(args, cfg: RunConfig) -> dict:
    presentation = load_presentation(args.presentation)
    word = parse_word(args.word, presentation.n_generators)
    if args.budget < 0:
        raise UsageError("--budget must be >= 0")
    outcome = decide_trivial(presentation, word, args.budget)
    return {
        "command": "decide",
        "presentation": presentation.name,
        "word": format_word(word),
        **outcome.to_json(),
    }


def _cmd_zd(args, cfg: RunConfig) -> dict:
    evaluation = theta(args.dim, _fraction_flag(args.width, "--width"))
    return {"command": "zd", **evaluation.to_json(cfg.digits)}


def _cmd_diagonal(args, cfg: RunConfig) -> dict:
    labels = [part.strip() for part in args.targets.split(",") if part.strip()]
    if not labels:
        raise UsageError("--targets must list at least one target")
    try:
        targets = [parse_target(text) for text in labels]
    except ValueError as exc:
        raise UsageError(f"--targets: {exc}") from None
    for oracle in targets:
        if in_hard_band(oracle.value):
            print(
                f"warning: target {oracle.label} lies inside the hard band "
                f"({HARD_BAND.lo}, {HARD_BAND.hi}); separation at desk "
                "budgets is unlikely",
                file=sys.stderr,
            )
    steps = args.steps if args.steps > 0 else len(targets)
    if steps > len(targets):
        raise UsageError("--steps cannot exceed the number of targets")
    if args.budget_per_step < 0:
        raise UsageError("--budget-per-step must be >= 0")
    run = run_diagonal(
        targets, steps, args.budget_per_step, gap_digits=DEFAULT_GAP_DIGITS
    )
    return {
        "command": "diagonal",
        "targets": [oracle.label for oracle in targets],
        **run.to_json(),
    }


def _cmd_cr_check(args, cfg: RunConfig) -> dict:
    presentation = load_presentation(args.presentation)
    radius = cfg.check_radius(args.radius, "--radius")
    strategy = strategy_for(presentation)
    ball = build_ball(strategy, radius)
    report = check_CR(ball, presentation, radius)
    return {
        "command": "cr-check",
        "presentation": presentation.name,
        **report.to_json(),
    }


_HANDLERS = {
    "check": _cmd_check,
    "wp": _cmd_wp,
    "rho": _cmd_rho,
    "growth": _cmd_growth,
    "entropy": _cmd_entropy,
    "lower-seq": _cmd_lower_seq,
    "decide": _cmd_decide,
    "zd": _cmd_zd,
    "diagonal": _cmd_diagonal,
    "cr-check": _cmd_cr_check,
}


def render(payload: dict, out_format: str) -> str:
    document = {"schema": SCHEMA, **payload}
    if out_format == "json":
        return json.dumps(document, indent=2) + "\n"
    lines = []
    for key, value in document.items():
        if isinstance(value, str):
            lines.append(f"{key}: {value}")
        else:
            lines.append(f"{key}: {json.dumps(value)}")
    return "\n".join(lines) + "\n"


def main(argv: Optional[Sequence[int]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = RunConfig(
            subcommand=args.subcommand,
            path=getattr(args, "presentation", None),
            out_format=args.format,
            radius_cap=args.radius_cap,
            digits=args.digits,
            seed=args.seed,
            threads=args.threads,
        )
        payload = _HANDLERS[args.subcommand](args, cfg)
    except UsageError as exc:
        print(f"grouprho: {exc}", file=sys.stderr)
        return 2
    except WordSyntaxError as exc:
        print(f"grouprho: bad word: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"grouprho: {exc}", file=sys.stderr)
        return 2
    except (ValueError, NotImplementedError) as exc:
        print(f"grouprho: precondition violated: {exc}", file=sys.stderr)
        return 3
    sys.stdout.write(render(payload, cfg.out_format))
    return 0


if __name__ == "__main__":
    sys.exit(main())
