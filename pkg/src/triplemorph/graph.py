"""In-memory indexed triple set with pattern matching.

The graph keeps three lookup indexes (by subject, predicate and object) that
are maintained on every insert.  Matching is deterministic: results are
ordered by the lexicographic serialization of the matched triples, regardless
of which index answered the query.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Set, Union

from .terms import Iri, Literal, Term, Triple


@dataclass(frozen=True)
class Var:
    """A pattern variable.  The name "_" is anonymous: matches anything,
    never enters a binding."""

    name: str

    @property
    def anonymous(self) -> bool:
        return self.name == "_"

    def __str__(self):
        return "?" + self.name


PatternPart = Union[Var, Iri, Literal]

# A binding maps variable names to ground terms.  Bindings are treated as
# immutable: extension always builds a new dict.
Binding = Dict[str, Term]


@dataclass(frozen=True)
class TriplePattern:
    subject: PatternPart
    predicate: PatternPart
    object: PatternPart

    def __post_init__(self):
        if isinstance(self.subject, Literal):
            raise ValueError("literal in subject position")
        if isinstance(self.predicate, Literal):
            raise ValueError("literal in predicate position")

    def parts(self):
        return (self.subject, self.predicate, self.object)

    def variables(self) -> Set[str]:
        return {p.name for p in self.parts() if isinstance(p, Var) and not p.anonymous}

    def __str__(self):
        return "(%s, %s, %s)" % tuple(
            str(p) if isinstance(p, Var) else p.n3() for p in self.parts()
        )


def _resolve(part: PatternPart, binding: Mapping[str, Term]) -> PatternPart:
    if isinstance(part, Var) and not part.anonymous and part.name in binding:
        return binding[part.name]
    return part


class Graph:
    """Set of triples plus prefix table, indexed for matching."""

    def __init__(self, prefixes: Optional[Mapping[str, str]] = None):
        self._triples: Set[Triple] = set()
        self._by_subject: Dict[Iri, Set[Triple]] = defaultdict(set)
        self._by_predicate: Dict[Iri, Set[Triple]] = defaultdict(set)
        self._by_object: Dict[Term, Set[Triple]] = defaultdict(set)
        self.prefixes: Dict[str, str] = dict(prefixes or {})

    # -- mutation ---------------------------------------------------------

    def insert(self, t: Triple) -> bool:
        """Add a triple; returns True iff it was not already present."""
        if t in self._triples:
            return False
        self._triples.add(t)
        self._by_subject[t.subject].add(t)
        self._by_predicate[t.predicate].add(t)
        self._by_object[t.object].add(t)
        return True

    def update(self, triples: Iterable[Triple]) -> int:
        return sum(1 for t in triples if self.insert(t))

    def remove(self, t: Triple) -> bool:
        if t not in self._triples:
            return False
        self._triples.discard(t)
        self._by_subject[t.subject].discard(t)
        self._by_predicate[t.predicate].discard(t)
        self._by_object[t.object].discard(t)
        return True

    def reset(self) -> "Graph":
        """Drop all triples, keep prefixes."""
        self._triples.clear()
        self._by_subject.clear()
        self._by_predicate.clear()
        self._by_object.clear()
        return self

    # -- accessors --------------------------------------------------------

    def __len__(self) -> int:
        return len(self._triples)

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    def triples(self) -> List[Triple]:
        """All triples in canonical (sorted) order."""
        return sorted(self._triples, key=Triple.sort_key)

    def copy(self) -> "Graph":
        g = Graph(self.prefixes)
        g.update(self._triples)
        return g

    def union(self, other: "Graph") -> "Graph":
        g = Graph({**self.prefixes, **other.prefixes})
        g.update(self._triples)
        g.update(other._triples)
        return g

    def subjects_of(self, predicate: Iri) -> Set[Iri]:
        return {t.subject for t in self._by_predicate.get(predicate, ())}

    # -- matching ---------------------------------------------------------

    def _candidates(self, s, p, o, force_index: Optional[str]) -> Iterable[Triple]:
        if force_index == "s":
            return self._by_subject.get(s, set()) if isinstance(s, Iri) else self._triples
        if force_index == "p":
            return self._by_predicate.get(p, set()) if isinstance(p, Iri) else self._triples
        if force_index == "o":
            return self._by_object.get(o, set()) if not isinstance(o, Var) else self._triples
        if isinstance(s, Iri):
            return self._by_subject.get(s, set())
        if not isinstance(o, Var):
            return self._by_object.get(o, set())
        if isinstance(p, Iri):
            return self._by_predicate.get(p, set())
        return self._triples

    def match(
        self,
        pattern: TriplePattern,
        seed: Optional[Binding] = None,
        force_index: Optional[str] = None,
    ) -> List[Binding]:
        """One binding per matching triple, each extending ``seed``.

        Variables already bound in the seed are substituted before matching.
        Results are sorted by the matched triple's serialization, so two
        calls with equal inputs return equal sequences.
        """
        seed = seed or {}
        s = _resolve(pattern.subject, seed)
        p = _resolve(pattern.predicate, seed)
        o = _resolve(pattern.object, seed)
        if isinstance(s, Literal) or isinstance(p, Literal):
            return []  # a variable bound to a literal can never match s/p

        matched: List[Triple] = []
        for t in self._candidates(s, p, o, force_index):
            if isinstance(s, Iri) and t.subject != s:
                continue
            if isinstance(p, Iri) and t.predicate != p:
                continue
            if not isinstance(o, Var) and t.object != o:
                continue
            # consistency for repeated variables within the pattern
            local: Binding = {}
            ok = True
            for part, value in ((s, t.subject), (p, t.predicate), (o, t.object)):
                if isinstance(part, Var) and not part.anonymous:
                    if part.name in local and local[part.name] != value:
                        ok = False
                        break
                    local[part.name] = value
            if ok:
                matched.append(t)

        matched.sort(key=Triple.sort_key)
        out: List[Binding] = []
        for t in matched:
            b = dict(seed)
            for part, value in (
                (pattern.subject, t.subject),
                (pattern.predicate, t.predicate),
                (pattern.object, t.object),
            ):
                if isinstance(part, Var) and not part.anonymous and part.name not in b:
                    b[part.name] = value
            # repeated-variable consistency across the full pattern
            if _consistent(pattern, t, b):
                out.append(b)
        return out

    def shorten(self, term: Term, extra: Optional[Mapping[str, str]] = None) -> str:
        """Prefixed short form of a term where a prefix applies, else n3."""
        prefixes = dict(self.prefixes)
        if extra:
            prefixes.update(extra)
        if isinstance(term, Iri):
            for prefix, ns in sorted(prefixes.items(), key=lambda kv: -len(kv[1])):
                if term.value.startswith(ns) and len(term.value) > len(ns):
                    return f"{prefix}:{term.value[len(ns):]}"
            return term.n3()
        dt = term.datatype
        for prefix, ns in prefixes.items():
            if dt.value.startswith(ns):
                return f'"{term.lexical}"^^{prefix}:{dt.value[len(ns):]}'
        return term.n3()


def _consistent(pattern: TriplePattern, t: Triple, binding: Binding) -> bool:
    for part, value in (
        (pattern.subject, t.subject),
        (pattern.predicate, t.predicate),
        (pattern.object, t.object),
    ):
        if isinstance(part, Var) and not part.anonymous:
            if binding.get(part.name) != value:
                return False
        elif part != value and not isinstance(part, Var):
            return False
    return True
