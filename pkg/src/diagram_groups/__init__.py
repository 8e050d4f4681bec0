"""Diagram groups over semigroup presentations: diagram arithmetic, Squier and
Farley complexes, hyperplanes, and a freeness analyzer."""

from .verdict import Budget, DEFAULT_BUDGET, Status, Verdict
from .presentation import (
    Atom,
    Presentation,
    PresentationError,
    Relation,
    RewriteEdge,
    enumerate_word_class,
    one_step_rewrites,
    parse_presentation,
    words_equal_mod_p,
)
from .diagrams import (
    Diagram,
    DiagramError,
    atom_diagram,
    concatenate,
    group_product,
    invert,
    is_minimal,
    is_prefix,
    maximal_thin_suffix,
    reduce,
    sum_diagrams,
    trivial_diagram,
)

__version__ = "0.1.0"

__all__ = [
    "Atom",
    "Budget",
    "DEFAULT_BUDGET",
    "Diagram",
    "DiagramError",
    "Presentation",
    "PresentationError",
    "Relation",
    "RewriteEdge",
    "Status",
    "Verdict",
    "atom_diagram",
    "concatenate",
    "enumerate_word_class",
    "group_product",
    "invert",
    "is_minimal",
    "is_prefix",
    "maximal_thin_suffix",
    "one_step_rewrites",
    "parse_presentation",
    "reduce",
    "sum_diagrams",
    "trivial_diagram",
    "words_equal_mod_p",
]
