"""Eliminative induction of cause/effect correspondences with Mill's canons."""

from .engine import EngineConfig, EMPolicy, Mode, SolutionSet, corroborate, find_causation, saturate, solve
from .errors import (
    ArityError,
    DepthExceeded,
    DuplicateId,
    EliminativeError,
    EmptySide,
    InvalidId,
    KBError,
    ParseError,
    UnboundResult,
)
from .frontend import parse_kb, parse_query, parse_term, render_kb
from .kb import (
    KnowledgeBase,
    KnownCausation,
    Observation,
    Term,
    add_known,
    add_observation,
    make_observation,
    occurrences,
    restrict,
)
from .methods import (
    Conjecture,
    EMStatus,
    FunctorPattern,
    MethodId,
    apply_ma,
    apply_mcv,
    apply_md,
    apply_mr,
    conflict_check,
    em_parametric,
    em_strict,
    score,
)
from .query import And, Atom, FunctorPat, Or, Var, render_query

__version__ = "0.1.0"

__all__ = [
    "And",
    "ArityError",
    "Atom",
    "Conjecture",
    "DepthExceeded",
    "DuplicateId",
    "EMPolicy",
    "EMStatus",
    "EliminativeError",
    "EmptySide",
    "EngineConfig",
    "FunctorPat",
    "FunctorPattern",
    "InvalidId",
    "KBError",
    "KnowledgeBase",
    "KnownCausation",
    "MethodId",
    "Mode",
    "Observation",
    "Or",
    "ParseError",
    "SolutionSet",
    "Term",
    "UnboundResult",
    "Var",
    "add_known",
    "add_observation",
    "apply_ma",
    "apply_mcv",
    "apply_md",
    "apply_mr",
    "conflict_check",
    "corroborate",
    "em_parametric",
    "em_strict",
    "find_causation",
    "make_observation",
    "occurrences",
    "parse_kb",
    "parse_query",
    "parse_term",
    "render_kb",
    "render_query",
    "restrict",
    "saturate",
    "score",
    "solve",
]
