"""Certified two-sided bounds on spectral radius, growth rate and entropy
of finitely presented marked groups.

The package computes exact return probabilities on Cayley-graph balls,
turns them into certified enclosures of the spectral radius (polynomially
tight for C'(1/6) small-cancellation presentations), semi-decides word
triviality by racing a triviality witness search against a spectral
separation, evaluates lattice Green functions rigorously, verifies the
centroid-set properties behind the polynomial upper bound, and runs a
certified avoidance driver that steers a tower of quotients away from
prescribed computable reals.
"""

from .asymptotics import EntropyReport, GrowthReport, entropy, growth
from .bounds import (
    CertifiedInterval,
    Comparison,
    RootBound,
    compare,
    rho_interval,
    rho_lower,
    rho_upper,
    to_decimal,
)
from .cayley import BallGraph, WalkCache, build_ball, free_radial_p, walk_counts
from .centroids import CRReport, CentroidSet, centroid_set, check_CR
from .decider import DecisionOutcome, Promise, Verdict, decide_trivial, quotient_by
from .dehn import (
    DehnStrategy,
    EnumerationStrategy,
    FreeGroupStrategy,
    Triviality,
    WordProblemStrategy,
    ZdCubeStrategy,
    coincidence_radius,
    strategy_for,
)
from .diagonal import (
    ComputableRealOracle,
    DiagonalRun,
    DiagonalState,
    SeparationCertificate,
    diagonal_step,
    run_diagonal,
)
from .enumeration import (
    QuotientApprox,
    TrivialWordStream,
    lower_spectral_sequence,
    trivial_counts,
)
from .intervals import EntropyExpr, RInterval
from .presentation import (
    CancellationReport,
    Presentation,
    check_small_cancellation,
    free_group,
    load_presentation,
    parse_presentation,
    symmetrize,
)
from .words import Word, format_word, free_reduce, parse_word
from .zdgreen import GreenEvaluation, cube_p2n, rho_zd_cube, theta

__version__ = "0.1.0"

__all__ = [
    "BallGraph",
    "CRReport",
    "CancellationReport",
    "CentroidSet",
    "CertifiedInterval",
    "Comparison",
    "ComputableRealOracle",
    "DecisionOutcome",
    "DehnStrategy",
    "DiagonalRun",
    "DiagonalState",
    "EntropyExpr",
    "EntropyReport",
    "EnumerationStrategy",
    "FreeGroupStrategy",
    "GreenEvaluation",
    "GrowthReport",
    "Presentation",
    "Promise",
    "QuotientApprox",
    "RInterval",
    "RootBound",
    "SeparationCertificate",
    "Triviality",
    "TrivialWordStream",
    "Verdict",
    "WalkCache",
    "Word",
    "WordProblemStrategy",
    "ZdCubeStrategy",
    "build_ball",
    "centroid_set",
    "check_CR",
    "check_small_cancellation",
    "coincidence_radius",
    "compare",
    "cube_p2n",
    "decide_trivial",
    "diagonal_step",
    "entropy",
    "format_word",
    "free_group",
    "free_radial_p",
    "free_reduce",
    "growth",
    "load_presentation",
    "lower_spectral_sequence",
    "parse_presentation",
    "parse_word",
    "quotient_by",
    "rho_interval",
    "rho_lower",
    "rho_upper",
    "rho_zd_cube",
    "run_diagonal",
    "strategy_for",
    "symmetrize",
    "theta",
    "to_decimal",
    "trivial_counts",
    "walk_counts",
    "__version__",
]
