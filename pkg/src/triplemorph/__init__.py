"""triplemorph: rule-based transformation and validation of triple-graph models."""

from .engine import TransformResult, apply_rules, evaluate_body, gen_id
from .formats import ParseError, parse_ntriples, parse_turtle_subset, serialize_ntriples
from .graph import Binding, Graph, TriplePattern, Var
from .lang import Constraint, Rule, parse_constraints, parse_rules
from .terms import Iri, Literal, Term, Triple
from .validate import (
    ValidationReport,
    Violation,
    check,
    check_catalog,
    format_lines,
    format_text,
)

__all__ = [
    "TransformResult",
    "apply_rules",
    "evaluate_body",
    "gen_id",
    "ParseError",
    "parse_ntriples",
    "parse_turtle_subset",
    "serialize_ntriples",
    "Binding",
    "Graph",
    "TriplePattern",
    "Var",
    "Constraint",
    "Rule",
    "parse_constraints",
    "parse_rules",
    "Iri",
    "Literal",
    "Term",
    "Triple",
    "ValidationReport",
    "Violation",
    "check",
    "check_catalog",
    "format_lines",
    "format_text",
]

__version__ = "0.1.0"
