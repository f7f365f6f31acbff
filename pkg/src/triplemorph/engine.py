"""Forward transformation engine.

Rules are evaluated in a single pass over a fixed source graph: every
binding that satisfies a rule body instantiates the rule head, and all head
triples are collected into a fresh target graph.  Rules never read the
target, so the result is independent of rule order and of the enumeration
order of source triples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from .graph import Binding, Graph, TriplePattern, Var
from .lang import (
    BodyAtom,
    Concat,
    Count,
    Eq,
    GenId,
    Neq,
    Not,
    Rule,
)
from .terms import Iri, Literal, Term, Triple, string


class EvalError(ValueError):
    pass


def gen_id(parts: Sequence[Union[Iri, str]]) -> Iri:
    """Concatenate an IRI with local fragments and constant suffixes.

    The first part keeps its full IRI (namespace included); every later
    part contributes only its local fragment if it is an IRI, else the
    string itself.  No separator is inserted.
    """
    if not parts:
        raise EvalError("gen_id needs at least one part")
    first = parts[0]
    if not isinstance(first, Iri):
        raise EvalError("gen_id first part must be an IRI")
    out = first.value
    for part in parts[1:]:
        out += part.local if isinstance(part, Iri) else str(part)
    return Iri(out)


class GenIdTracker:
    """Records which argument lists produced each generated IRI so that
    accidental collisions (distinct inputs, same output) can be reported."""

    def __init__(self):
        self.produced: Dict[Iri, Set[Tuple]] = {}

    def record(self, iri: Iri, parts: Tuple):
        self.produced.setdefault(iri, set()).add(parts)

    def collisions(self) -> List[str]:
        out = []
        for iri, part_sets in sorted(self.produced.items()):
            if len(part_sets) > 1:
                out.append(
                    "gen_id collision: %s generated from %d distinct argument lists"
                    % (iri.n3(), len(part_sets))
                )
        return out


def _resolve_arg(arg, binding: Binding, position: int):
    if isinstance(arg, Var):
        if arg.anonymous or arg.name not in binding:
            raise EvalError(f"unbound builtin argument ?{arg.name} at atom {position}")
        return binding[arg.name]
    return arg


def _lexical(term, position: int) -> str:
    if isinstance(term, Literal):
        return term.lexical
    raise EvalError(f"expected a literal at atom {position}, got {term}")


def _bind_output(binding: Binding, out: Var, value: Term) -> Optional[Binding]:
    if out.anonymous:
        return binding
    if out.name in binding:
        return binding if binding[out.name] == value else None
    extended = dict(binding)
    extended[out.name] = value
    return extended


def _binding_key(b: Binding):
    return tuple(sorted((name, _term_key(t)) for name, t in b.items()))


def _term_key(t: Term):
    return t.n3()


def evaluate_body(
    graph: Graph,
    body: Sequence[BodyAtom],
    seed: Optional[Binding] = None,
    tracker: Optional[GenIdTracker] = None,
) -> List[Binding]:
    """All maximal bindings satisfying the body, deduplicated, in a
    deterministic order.  Atoms are evaluated left to right; ``not``
    succeeds iff its conjunction has no solutions under the current
    binding; ``count`` tests without binding anything."""
    solutions: List[Binding] = [dict(seed) if seed else {}]
    for position, atom in enumerate(body, start=1):
        if not solutions:
            break
        next_solutions: List[Binding] = []
        for b in solutions:
            next_solutions.extend(_eval_atom(graph, atom, b, position, tracker))
        solutions = next_solutions

    seen = set()
    unique: List[Binding] = []
    for b in sorted(solutions, key=_binding_key):
        key = _binding_key(b)
        if key not in seen:
            seen.add(key)
            unique.append(b)
    return unique


def _eval_atom(
    graph: Graph,
    atom: BodyAtom,
    binding: Binding,
    position: int,
    tracker: Optional[GenIdTracker],
) -> List[Binding]:
    if isinstance(atom, TriplePattern):
        return graph.match(atom, binding)
    if isinstance(atom, (Eq, Neq)):
        left = _resolve_arg(atom.left, binding, position)
        right = _resolve_arg(atom.right, binding, position)
        hold = (left == right) if isinstance(atom, Eq) else (left != right)
        return [binding] if hold else []
    if isinstance(atom, Concat):
        left = _lexical(_resolve_arg(atom.left, binding, position), position)
        right = _lexical(_resolve_arg(atom.right, binding, position), position)
        result = _bind_output(binding, atom.out, string(left + right))
        return [result] if result is not None else []
    if isinstance(atom, GenId):
        parts = tuple(
            _resolve_arg(p, binding, position) if isinstance(p, Var) else p
            for p in atom.parts
        )
        iri = gen_id(parts)
        if tracker is not None:
            tracker.record(iri, tuple(p.value if isinstance(p, Iri) else str(p) for p in parts))
        result = _bind_output(binding, atom.out, iri)
        return [result] if result is not None else []
    if isinstance(atom, Not):
        inner = evaluate_body(graph, atom.atoms, binding, tracker)
        return [binding] if not inner else []
    if isinstance(atom, Count):
        return [binding] if count_eval(graph, atom, binding, tracker) else []
    raise EvalError(f"unknown body atom: {atom!r}")


_CMP = {
    "=": lambda n, k: n == k,
    "!=": lambda n, k: n != k,
    "<": lambda n, k: n < k,
    ">": lambda n, k: n > k,
    "<=": lambda n, k: n <= k,
    ">=": lambda n, k: n >= k,
}


def count_eval(
    graph: Graph,
    atom: Count,
    binding: Binding,
    tracker: Optional[GenIdTracker] = None,
) -> bool:
    """Count distinct instantiations of the counted variable over the inner
    conjunction under the current binding, then compare against the bound."""
    for g in atom.group_by:
        if not g.anonymous and g.name not in binding:
            raise EvalError(f"unbound groupBy variable ?{g.name}")
    inner = evaluate_body(graph, atom.atoms, binding, tracker)
    values = {_term_key(b[atom.var.name]) for b in inner if atom.var.name in b}
    return _CMP[atom.comparator](len(values), atom.bound)


def _instantiate(part, binding: Binding):
    if isinstance(part, Var):
        if part.anonymous or part.name not in binding:
            raise EvalError(f"unbound head variable ?{part.name}")
        return binding[part.name]
    return part


@dataclass
class TransformResult:
    target: Graph
    rules_fired: int = 0
    triples_produced: int = 0
    duplicates_collapsed: int = 0
    warnings: List[str] = field(default_factory=list)


def apply_rules(source: Graph, rules: Sequence[Rule]) -> TransformResult:
    """Materialize the target graph: the set of head instantiations over
    all rules and all satisfying bindings.  The source is never modified
    and the target is never read during evaluation."""
    target = Graph(dict(source.prefixes))
    tracker = GenIdTracker()
    fired = 0
    produced = 0
    duplicates = 0
    for rule in rules:
        for binding in evaluate_body(source, rule.body, None, tracker):
            fired += 1
            t = Triple(
                _instantiate(rule.head.subject, binding),
                _instantiate(rule.head.predicate, binding),
                _instantiate(rule.head.object, binding),
            )
            produced += 1
            if not target.insert(t):
                duplicates += 1
    return TransformResult(
        target=target,
        rules_fired=fired,
        triples_produced=produced,
        duplicates_collapsed=duplicates,
        warnings=tracker.collisions(),
    )
