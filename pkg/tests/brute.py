"""Brute-force evaluation oracle.

Deliberately naive and independent of the engine: variables in pattern
atoms are enumerated over the graph's full term universe and each atom is
checked on ground instantiations.  Builtins are recomputed from scratch
(including an independent gen_id), negation and counting recurse into the
same enumerator.  Used to cross-check both rule application and constraint
checking.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Set, Tuple

from triplemorph.graph import Graph, TriplePattern, Var
from triplemorph.lang import BodyAtom, Concat, Constraint, Count, Eq, GenId, Neq, Not, Rule
from triplemorph.terms import Iri, Literal, Term, Triple, string


def term_universe(graph: Graph) -> List[Term]:
    seen = {}
    for t in graph:
        for term in (t.subject, t.predicate, t.object):
            seen[term.n3()] = term
    return [seen[k] for k in sorted(seen)]


def _local_fragment(iri: Iri) -> str:
    value = iri.value
    if "#" in value:
        return value[value.rindex("#") + 1 :]
    return value[value.rindex("/") + 1 :]


def _brute_gen_id(parts) -> Iri:
    assert isinstance(parts[0], Iri)
    out = parts[0].value
    for p in parts[1:]:
        out += _local_fragment(p) if isinstance(p, Iri) else str(p)
    return Iri(out)


def _value(arg, binding):
    if isinstance(arg, Var):
        return binding[arg.name]
    return arg


def _assignments(universe, count):
    if count == 0:
        yield ()
        return
    for term in universe:
        for rest in _assignments(universe, count - 1):
            yield (term,) + rest


def solutions(graph: Graph, atoms: Sequence[BodyAtom], binding: Optional[Dict] = None) -> List[Dict]:
    binding = dict(binding or {})
    if not atoms:
        return [binding]
    atom, rest = atoms[0], atoms[1:]
    out: List[Dict] = []

    if isinstance(atom, TriplePattern):
        universe = term_universe(graph)
        free = []
        for part in atom.parts():
            if isinstance(part, Var) and not part.anonymous and part.name not in binding and part.name not in free:
                free.append(part.name)
        anon = sum(1 for part in atom.parts() if isinstance(part, Var) and part.anonymous)
        for assignment in _assignments(universe, len(free)):
            b = dict(binding)
            b.update(zip(free, assignment))
            parts = []
            ok = True
            for part in atom.parts():
                if isinstance(part, Var) and part.anonymous:
                    parts.append(None)  # wildcard, handled below
                elif isinstance(part, Var):
                    parts.append(b[part.name])
                else:
                    parts.append(part)
            s, p, o = parts
            if s is not None and not isinstance(s, Iri):
                continue
            if p is not None and not isinstance(p, Iri):
                continue
            matched = any(
                (s is None or t.subject == s)
                and (p is None or t.predicate == p)
                and (o is None or t.object == o)
                for t in graph
            )
            if matched:
                out.extend(solutions(graph, rest, b))
        return out

    if isinstance(atom, Eq):
        if _value(atom.left, binding) == _value(atom.right, binding):
            return solutions(graph, rest, binding)
        return []
    if isinstance(atom, Neq):
        if _value(atom.left, binding) != _value(atom.right, binding):
            return solutions(graph, rest, binding)
        return []
    if isinstance(atom, Concat):
        left = _value(atom.left, binding)
        right = _value(atom.right, binding)
        result = string(left.lexical + right.lexical)
        return _with_output(graph, rest, binding, atom.out, result)
    if isinstance(atom, GenId):
        parts = [_value(p, binding) if isinstance(p, Var) else p for p in atom.parts]
        return _with_output(graph, rest, binding, atom.out, _brute_gen_id(parts))
    if isinstance(atom, Not):
        if not solutions(graph, atom.atoms, binding):
            return solutions(graph, rest, binding)
        return []
    if isinstance(atom, Count):
        inner = solutions(graph, atom.atoms, binding)
        values = {b[atom.var.name].n3() for b in inner if atom.var.name in b}
        n, k = len(values), atom.bound
        holds = {
            "=": n == k, "!=": n != k, "<": n < k, ">": n > k, "<=": n <= k, ">=": n >= k,
        }[atom.comparator]
        return solutions(graph, rest, binding) if holds else []
    raise AssertionError(f"unknown atom {atom!r}")


def _with_output(graph, rest, binding, out: Var, value: Term) -> List[Dict]:
    if out.anonymous:
        return solutions(graph, rest, binding)
    if out.name in binding:
        if binding[out.name] != value:
            return []
        return solutions(graph, rest, binding)
    b = dict(binding)
    b[out.name] = value
    return solutions(graph, rest, b)


def brute_apply_rules(source: Graph, rules: Sequence[Rule]) -> Set[Triple]:
    triples: Set[Triple] = set()
    for rule in rules:
        for b in solutions(source, rule.body):
            parts = []
            for part in rule.head.parts():
                parts.append(b[part.name] if isinstance(part, Var) else part)
            triples.add(Triple(*parts))
    return triples


def brute_check(graph: Graph, c: Constraint) -> Set[Tuple[Tuple[str, str], ...]]:
    """Set of witness tuples ((var, term-n3), ...) for a constraint over an
    already phase-selected graph."""
    witnesses: Set[Tuple[Tuple[str, str], ...]] = set()
    for clause in c.clauses:
        for b in solutions(graph, clause):
            witnesses.add(tuple((v.name, b[v.name].n3()) for v in c.report))
    return witnesses
