"""Stated SL_n skein normal forms at q = 1, with exact polynomial arithmetic.

Main entry points: ``MarkedManifoldSpec`` to describe a manifold,
``parse_web`` / ``Web`` for webs, ``build_ring`` + ``normalize`` for
canonical forms, and ``phi_direct`` / ``evaluate`` for numerical checks.
"""

from .combinatorics import (
    LaurentQPoly,
    Permutation,
    all_permutations,
    inversion_length,
    q_factorial,
    q_factorial_identity,
    q_integer,
    signed_permutations,
)
from .errors import (
    BudgetExceeded,
    InvalidWordError,
    ParseError,
    RingMismatchError,
    SizeLimitError,
    SkeinError,
    SpecError,
    StateError,
    TermLimitError,
    UnsupportedConfiguration,
)
from .evaluation import (
    Representation,
    evaluate,
    phi_direct,
    probably_zero,
    sample_representation,
    sample_sln,
    substitute,
    tau_check,
)
from .groups import (
    Circle,
    GroupoidPath,
    GroupPresentation,
    MarkedManifoldSpec,
    Word,
    a_matrix,
    holonomy,
    morphism_matrix,
    parse_word,
    validate_manifold,
)
from .ideals import GroebnerBasis, buchberger, is_member, is_nilpotent, manifold_ideal
from .parsing import format_manifold, format_web, parse_manifold, parse_web
from .polyring import Poly, PolyMatrix, PolyRing, adjugate, determinant, parse_poly, reduce_by_dets
from .skein import (
    Edge,
    FramedKnot,
    MarkingEnd,
    SkeinRing,
    StatedArc,
    Vertex,
    VertexEnd,
    Web,
    arc_element,
    build_ring,
    expand_all,
    expand_vertex,
    iota,
    jmath,
    knot_element,
    normalize,
    relation_suite,
)
from .splitting import cut_spec_of, glue_rep, theta_split

__all__ = [
    "a_matrix",
    "adjugate",
    "all_permutations",
    "arc_element",
    "buchberger",
    "BudgetExceeded",
    "build_ring",
    "Circle",
    "cut_spec_of",
    "determinant",
    "Edge",
    "evaluate",
    "expand_all",
    "expand_vertex",
    "format_manifold",
    "format_web",
    "FramedKnot",
    "glue_rep",
    "GroebnerBasis",
    "GroupoidPath",
    "GroupPresentation",
    "holonomy",
    "InvalidWordError",
    "inversion_length",
    "iota",
    "is_member",
    "is_nilpotent",
    "jmath",
    "knot_element",
    "LaurentQPoly",
    "manifold_ideal",
    "MarkedManifoldSpec",
    "MarkingEnd",
    "morphism_matrix",
    "normalize",
    "parse_manifold",
    "parse_poly",
    "parse_web",
    "parse_word",
    "ParseError",
    "Permutation",
    "phi_direct",
    "Poly",
    "PolyMatrix",
    "PolyRing",
    "probably_zero",
    "q_factorial",
    "q_factorial_identity",
    "q_integer",
    "reduce_by_dets",
    "relation_suite",
    "Representation",
    "RingMismatchError",
    "sample_representation",
    "sample_sln",
    "signed_permutations",
    "SizeLimitError",
    "SkeinError",
    "SkeinRing",
    "SpecError",
    "StatedArc",
    "StateError",
    "substitute",
    "tau_check",
    "TermLimitError",
    "theta_split",
    "UnsupportedConfiguration",
    "validate_manifold",
    "Vertex",
    "VertexEnd",
    "Web",
    "Word",
]

__version__ = "0.1.0"
