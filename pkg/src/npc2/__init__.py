"""Nonpositively curved 2-complexes: link condition, collapses, homology,
fundamental groups and a strong pi_1-injectivity scanner."""

from npc2.complex import (
    Complex2,
    ComponentDecomposition,
    Subcomplex,
    closure,
    combinatorial_ball,
    connected_components,
    intersect,
    star_and_link,
    union,
    validate,
)
from npc2.verdict import Budget, TriVerdict, Verdict

__all__ = [
    "Budget",
    "Complex2",
    "ComponentDecomposition",
    "Subcomplex",
    "TriVerdict",
    "Verdict",
    "closure",
    "combinatorial_ball",
    "connected_components",
    "intersect",
    "star_and_link",
    "union",
    "validate",
]

__version__ = "0.1.0"
