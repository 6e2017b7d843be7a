"""
SIL — Stable Independence Lab

Independence relations over amalgamation diagrams in finite concrete
categories, checked against the stable-independence axioms by exhaustive
search at small bounds. Every verdict is deterministic and carries its
witnesses and an audit log.
"""

from .catalog import make_class, make_relation, parse_class_spec, relations_for
from .colimits import (
    check_effective_unions,
    is_effective_square,
    is_pullback_square,
    is_regular_mono,
    pullback,
    pushout,
    verify_ringel,
)
from .controller import State, Workbench
from .diagrams import AmalgamationDiagram, SearchBudget, Span, Square, amalgams_equivalent, dual_diagram, enumerate_amalgams
from .experiments import canonicity_search, differential_compare, run_axiom_suite, verify_pullback_consequence
from .galois import PointedExtension, check_tameness, count_types, find_order_property, gtp_equal
from .independence import IndependenceRelationSpec, dual_relation, nfbar
from .profile_loader import Profile, ProfileLoader
from .reporting import CheckReport, SuiteReport, Verdict
from .structure_io import load_diagram, load_span, load_structure
from .structures import (
    AbstractClass,
    Embedding,
    FinStructure,
    Vocabulary,
    are_isomorphic,
    check_coherence,
    enumerate_embeddings,
    is_embedding,
)

__version__ = "1.0.0"
__all__ = [
    "AbstractClass",
    "AmalgamationDiagram",
    "CheckReport",
    "Embedding",
    "FinStructure",
    "IndependenceRelationSpec",
    "PointedExtension",
    "Profile",
    "ProfileLoader",
    "SearchBudget",
    "Span",
    "Square",
    "State",
    "SuiteReport",
    "Verdict",
    "Vocabulary",
    "Workbench",
    "amalgams_equivalent",
    "are_isomorphic",
    "canonicity_search",
    "check_coherence",
    "check_effective_unions",
    "check_tameness",
    "count_types",
    "differential_compare",
    "dual_diagram",
    "dual_relation",
    "enumerate_amalgams",
    "enumerate_embeddings",
    "find_order_property",
    "gtp_equal",
    "is_effective_square",
    "is_embedding",
    "is_pullback_square",
    "is_regular_mono",
    "load_diagram",
    "load_span",
    "load_structure",
    "make_class",
    "make_relation",
    "nfbar",
    "parse_class_spec",
    "pullback",
    "pushout",
    "relations_for",
    "run_axiom_suite",
    "verify_pullback_consequence",
    "verify_ringel",
]
