"""Declarative rule and constraint language.

Transformation rules (``.mtr`` files) look like Prolog clauses over triple
patterns::

    (?t, rdf:type, mmB:table) :- (?d, rdf:type, mmA:data), gen_id([?d, "table1"], ?t).

Constraints (``.mtc`` files) carry a header and a body whose *solutions are
violations*::

    constraint 1 attribute_distinct_names phase=source kind=SR tag=WF report(?d, ?a1, ?a2) {
      (?d, mmA:data.attr_of, ?a1), ...
    }

A constraint may have several clauses separated by ``;`` — a violation of any
clause is a violation of the constraint.  Builtins: ``eq``, ``neq``,
``concat(a, b, ?out)`` and ``gen_id([part, ...], ?out)``.  Bodies may use
``not(...)`` and ``count(?v over (...) groupBy(?g)) CMP n``; transformation
rules are restricted to negation- and aggregate-free bodies, and every head
variable must be bound by the body (checked at parse time).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from .formats import ParseError
from .graph import TriplePattern, Var
from .terms import RDF, XSD, Iri, Literal, Term

# Prefixes every rule/constraint file knows without declaring them.
BUILTIN_PREFIXES = {"rdf": RDF, "xsd": XSD}

COMPARATORS = ("=", "!=", "<=", ">=", "<", ">")

PHASES = ("source", "target", "cross")
KINDS = ("SC", "SR")
TAGS = ("WF", "TR")


# -- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Eq:
    left: Union[Var, Term]
    right: Union[Var, Term]


@dataclass(frozen=True)
class Neq:
    left: Union[Var, Term]
    right: Union[Var, Term]


@dataclass(frozen=True)
class Concat:
    left: Union[Var, Term]
    right: Union[Var, Term]
    out: Var


@dataclass(frozen=True)
class GenId:
    parts: Tuple[Union[Var, Iri, str], ...]
    out: Var


Builtin = Union[Eq, Neq, Concat, GenId]


@dataclass(frozen=True)
class Not:
    atoms: Tuple["BodyAtom", ...]


@dataclass(frozen=True)
class Count:
    var: Var
    atoms: Tuple["BodyAtom", ...]
    comparator: str  # one of COMPARATORS
    bound: int
    group_by: Tuple[Var, ...] = ()


BodyAtom = Union[TriplePattern, Builtin, Not, Count]


@dataclass(frozen=True)
class Rule:
    head: TriplePattern
    body: Tuple[BodyAtom, ...]


@dataclass
class Constraint:
    id: int
    label: str
    phase: str
    kind: str
    tag: str
    report: Tuple[Var, ...]
    clauses: Tuple[Tuple[BodyAtom, ...], ...]


# -- variable bookkeeping --------------------------------------------------


def _builtin_inputs(b: Builtin) -> List[Union[Var, Term, str]]:
    if isinstance(b, (Eq, Neq)):
        return [b.left, b.right]
    if isinstance(b, Concat):
        return [b.left, b.right]
    return list(b.parts)


def _builtin_output(b: Builtin) -> Optional[Var]:
    if isinstance(b, (Concat, GenId)):
        return b.out
    return None


def bound_after(atoms: Sequence[BodyAtom], initial: Set[str]) -> Set[str]:
    """Variables bound after evaluating atoms left to right, or raise
    ParseError-free ValueError on an unbound builtin input."""
    bound = set(initial)
    for atom in atoms:
        if isinstance(atom, TriplePattern):
            bound |= atom.variables()
        elif isinstance(atom, Not):
            bound_after(atom.atoms, bound)  # check inner, nothing escapes
        elif isinstance(atom, Count):
            bound_after(atom.atoms, bound)
        else:
            for arg in _builtin_inputs(atom):
                if isinstance(arg, Var) and not arg.anonymous and arg.name not in bound:
                    raise ValueError(f"unbound builtin argument ?{arg.name}")
            out = _builtin_output(atom)
            if out is not None and not out.anonymous:
                bound.add(out.name)
    return bound


def _has_negation(atoms: Sequence[BodyAtom]) -> bool:
    return any(isinstance(a, Not) for a in atoms)


def _has_count(atoms: Sequence[BodyAtom]) -> bool:
    return any(isinstance(a, Count) for a in atoms)


# -- tokenizer -------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<prefix_kw>@prefix\b)
  | (?P<neck>:-)
  | (?P<iriref><[^>\s]*>)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<dtype>\^\^)
  | (?P<var>\?[A-Za-z0-9_]+)
  | (?P<pname>[A-Za-z_][A-Za-z0-9_-]*:[A-Za-z0-9_][A-Za-z0-9_.-]*)
  | (?P<prefix_decl>[A-Za-z_][A-Za-z0-9_-]*:)
  | (?P<integer>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<cmp><=|>=|!=|=|<|>)
  | (?P<punct>[()\[\]{},;.])
    """,
    re.VERBOSE,
)


class _Tokenizer:
    def __init__(self, text: str):
        self.tokens: List[Tuple[str, str, int, int]] = []
        line, col, pos = 1, 1, 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {text[pos]!r}", line, col)
            kind, value, end = m.lastgroup, m.group(), m.end()
            if kind == "pname":
                stripped = value.rstrip(".")
                end -= len(value) - len(stripped)
                value = stripped
            if kind not in ("ws", "comment"):
                self.tokens.append((kind, value, line, col))
            consumed = text[pos:end]
            nl = consumed.count("\n")
            if nl:
                line += nl
                col = len(consumed) - consumed.rfind("\n")
            else:
                col += len(consumed)
            pos = end
        self.tokens.append(("eof", "", line, col))
        self.index = 0

    def peek(self):
        return self.tokens[self.index]

    def next(self):
        tok = self.tokens[self.index]
        if tok[0] != "eof":
            self.index += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok[2], tok[3])


# -- parser ----------------------------------------------------------------

_UNESC = {"\\\\": "\\", '\\"': '"', "\\n": "\n", "\\r": "\r", "\\t": "\t"}


class _Parser:
    def __init__(self, text: str):
        self.tz = _Tokenizer(text)
        self.prefixes: Dict[str, str] = dict(BUILTIN_PREFIXES)

    # basic helpers

    def _punct(self, char: str):
        tok = self.tz.next()
        if tok[0] != "punct" or tok[1] != char:
            self.tz.error(f"expected '{char}'", tok)

    def _at_punct(self, char: str) -> bool:
        return self.tz.peek()[:2] == ("punct", char)

    def _ident(self, what: str) -> str:
        tok = self.tz.next()
        if tok[0] != "ident":
            self.tz.error(f"expected {what}", tok)
        return tok[1]

    def _prefix_decl(self):
        self.tz.next()
        tok = self.tz.next()
        if tok[0] != "prefix_decl":
            self.tz.error("expected prefix name", tok)
        iri_tok = self.tz.next()
        if iri_tok[0] != "iriref":
            self.tz.error("expected namespace IRI", iri_tok)
        self._punct(".")
        self.prefixes[tok[1][:-1]] = iri_tok[1][1:-1]

    def _iri_from(self, tok) -> Iri:
        if tok[0] == "iriref":
            try:
                return Iri(tok[1][1:-1])
            except ValueError as e:
                self.tz.error(str(e), tok)
        prefix, local = tok[1].split(":", 1)
        if prefix not in self.prefixes:
            self.tz.error(f"undefined prefix {prefix}", tok)
        return Iri(self.prefixes[prefix] + local)

    def _string_lexical(self, tok) -> str:
        body = tok[1][1:-1]
        return re.sub(
            r"\\u[0-9A-Fa-f]{4}|\\.",
            lambda m: _UNESC.get(m.group(), chr(int(m.group()[2:], 16)) if m.group().startswith("\\u") else self.tz.error(f"bad escape {m.group()!r}", tok)),
            body,
        )

    def _literal(self, tok) -> Literal:
        lexical = self._string_lexical(tok)
        datatype = Iri(XSD + "string")
        if self.tz.peek()[0] == "dtype":
            self.tz.next()
            datatype = self._iri_from(self.tz.next())
        try:
            return Literal(lexical, datatype)
        except ValueError as e:
            self.tz.error(str(e), tok)

    def _term(self) -> Union[Var, Term]:
        tok = self.tz.next()
        if tok[0] == "var":
            return Var(tok[1][1:])
        if tok[0] in ("iriref", "pname"):
            return self._iri_from(tok)
        if tok[0] == "string":
            return self._literal(tok)
        self.tz.error("expected variable, IRI or literal", tok)

    # atoms

    def _pattern(self) -> TriplePattern:
        open_tok = self.tz.peek()
        self._punct("(")
        s = self._term()
        self._punct(",")
        p = self._term()
        self._punct(",")
        o = self._term()
        self._punct(")")
        try:
            return TriplePattern(s, p, o)
        except ValueError as e:
            self.tz.error(str(e), open_tok)

    def _atom(self) -> BodyAtom:
        tok = self.tz.peek()
        if tok[0] == "punct" and tok[1] == "(":
            return self._pattern()
        if tok[0] != "ident":
            self.tz.error("expected atom", tok)
        name = tok[1]
        if name in ("eq", "neq"):
            self.tz.next()
            self._punct("(")
            a = self._term()
            self._punct(",")
            b = self._term()
            self._punct(")")
            return Eq(a, b) if name == "eq" else Neq(a, b)
        if name == "concat":
            self.tz.next()
            self._punct("(")
            a = self._term()
            self._punct(",")
            b = self._term()
            self._punct(",")
            out = self._out_var()
            self._punct(")")
            return Concat(a, b, out)
        if name == "gen_id":
            self.tz.next()
            self._punct("(")
            self._punct("[")
            parts: List[Union[Var, Iri, str]] = [self._gen_id_part()]
            while self._at_punct(","):
                self.tz.next()
                parts.append(self._gen_id_part())
            self._punct("]")
            self._punct(",")
            out = self._out_var()
            self._punct(")")
            return GenId(tuple(parts), out)
        if name == "not":
            self.tz.next()
            self._punct("(")
            atoms = [self._atom()]
            while self._at_punct(","):
                self.tz.next()
                atoms.append(self._atom())
            self._punct(")")
            return Not(tuple(atoms))
        if name == "count":
            return self._count()
        self.tz.error(f"unknown atom '{name}'", tok)

    def _out_var(self) -> Var:
        tok = self.tz.next()
        if tok[0] != "var":
            self.tz.error("output argument must be a variable", tok)
        return Var(tok[1][1:])

    def _gen_id_part(self) -> Union[Var, Iri, str]:
        tok = self.tz.peek()
        part = self._term()
        if isinstance(part, Literal):
            if part.datatype.value != XSD + "string":
                self.tz.error("gen_id string parts must be plain strings", tok)
            return part.lexical
        return part

    def _count(self) -> Count:
        self.tz.next()  # count
        self._punct("(")
        var = self._out_var()
        over = self._ident("'over'")
        if over != "over":
            self.tz.error("expected 'over'")
        self._punct("(")
        atoms = [self._atom()]
        while self._at_punct(","):
            self.tz.next()
            atoms.append(self._atom())
        self._punct(")")
        group: List[Var] = []
        if self.tz.peek()[:2] == ("ident", "groupBy"):
            self.tz.next()
            self._punct("(")
            group.append(self._out_var())
            while self._at_punct(","):
                self.tz.next()
                group.append(self._out_var())
            self._punct(")")
        self._punct(")")
        cmp_tok = self.tz.next()
        if cmp_tok[0] != "cmp":
            self.tz.error("expected comparator", cmp_tok)
        bound_tok = self.tz.next()
        if bound_tok[0] != "integer":
            self.tz.error("expected integer bound", bound_tok)
        return Count(var, tuple(atoms), cmp_tok[1], int(bound_tok[1]), tuple(group))

    def _atom_list_until(self, terminator: str) -> List[BodyAtom]:
        atoms = [self._atom()]
        while self._at_punct(","):
            self.tz.next()
            atoms.append(self._atom())
        return atoms

    # rules

    def parse_rules(self) -> List[Rule]:
        rules: List[Rule] = []
        while self.tz.peek()[0] != "eof":
            if self.tz.peek()[0] == "prefix_kw":
                self._prefix_decl()
                continue
            head_tok = self.tz.peek()
            head = self._pattern()
            neck = self.tz.next()
            if neck[0] != "neck":
                self.tz.error("expected ':-'", neck)
            body = self._atom_list_until(".")
            self._punct(".")
            rule = Rule(head, tuple(body))
            self._check_rule(rule, len(rules) + 1, head_tok)
            rules.append(rule)
        return rules

    def _check_rule(self, rule: Rule, n: int, tok):
        if _has_negation(rule.body):
            self.tz.error(f"negation not allowed in transformation rule {n}", tok)
        if _has_count(rule.body):
            self.tz.error(f"count not allowed in transformation rule {n}", tok)
        try:
            bound = bound_after(rule.body, set())
        except ValueError as e:
            self.tz.error(f"{e} in rule {n}", tok)
        for name in sorted(rule.head.variables()):
            if name not in bound:
                self.tz.error(f"unsafe head variable ?{name} in rule {n}", tok)

    # constraints

    def parse_constraints(self) -> List[Constraint]:
        catalog: List[Constraint] = []
        seen_ids: Set[int] = set()
        while self.tz.peek()[0] != "eof":
            if self.tz.peek()[0] == "prefix_kw":
                self._prefix_decl()
                continue
            kw_tok = self.tz.next()
            if kw_tok[:2] != ("ident", "constraint"):
                self.tz.error("expected 'constraint'", kw_tok)
            id_tok = self.tz.next()
            if id_tok[0] != "integer":
                self.tz.error("expected constraint id", id_tok)
            cid = int(id_tok[1])
            if cid in seen_ids:
                self.tz.error(f"duplicate constraint id {cid}", id_tok)
            seen_ids.add(cid)
            label = self._ident("constraint label")
            phase = self._keyval("phase", PHASES)
            kind = self._keyval("kind", KINDS)
            tag = self._keyval("tag", TAGS)
            report = self._report()
            self._punct("{")
            clauses: List[Tuple[BodyAtom, ...]] = []
            while True:
                atoms = self._atom_list_until("}")
                clauses.append(tuple(atoms))
                if self._at_punct(";"):
                    self.tz.next()
                    continue
                break
            self._punct("}")
            c = Constraint(cid, label, phase, kind, tag, report, tuple(clauses))
            self._check_constraint(c, kw_tok)
            catalog.append(c)
        return catalog

    def _keyval(self, key: str, allowed) -> str:
        tok = self.tz.next()
        if tok[:2] != ("ident", key):
            self.tz.error(f"expected '{key}='", tok)
        eq = self.tz.next()
        if eq[:2] != ("cmp", "="):
            self.tz.error("expected '='", eq)
        val_tok = self.tz.next()
        if val_tok[0] != "ident" or val_tok[1] not in allowed:
            self.tz.error(f"{key} must be one of {', '.join(allowed)}", val_tok)
        return val_tok[1]

    def _report(self) -> Tuple[Var, ...]:
        tok = self.tz.next()
        if tok[:2] != ("ident", "report"):
            self.tz.error("expected 'report(...)'", tok)
        self._punct("(")
        out = [self._out_var()]
        while self._at_punct(","):
            self.tz.next()
            out.append(self._out_var())
        self._punct(")")
        return tuple(out)

    def _check_constraint(self, c: Constraint, tok):
        for i, clause in enumerate(c.clauses, start=1):
            try:
                bound = bound_after(clause, set())
            except ValueError as e:
                self.tz.error(f"{e} in constraint {c.id} clause {i}", tok)
            for v in c.report:
                if v.name not in bound:
                    self.tz.error(
                        f"report variable ?{v.name} not bound in constraint {c.id} clause {i}",
                        tok,
                    )


def parse_rules(text: str) -> List[Rule]:
    return _Parser(text).parse_rules()


def parse_constraints(text: str) -> List[Constraint]:
    return _Parser(text).parse_constraints()


# -- pretty printer --------------------------------------------------------


def _print_part(p) -> str:
    if isinstance(p, Var):
        return str(p)
    if isinstance(p, str):
        return '"%s"' % p
    return p.n3()


def print_atom(atom: BodyAtom) -> str:
    if isinstance(atom, TriplePattern):
        return "(%s, %s, %s)" % tuple(_print_part(p) for p in atom.parts())
    if isinstance(atom, Eq):
        return f"eq({_print_part(atom.left)}, {_print_part(atom.right)})"
    if isinstance(atom, Neq):
        return f"neq({_print_part(atom.left)}, {_print_part(atom.right)})"
    if isinstance(atom, Concat):
        return "concat(%s, %s, %s)" % (
            _print_part(atom.left),
            _print_part(atom.right),
            atom.out,
        )
    if isinstance(atom, GenId):
        return "gen_id([%s], %s)" % (
            ", ".join(_print_part(p) for p in atom.parts),
            atom.out,
        )
    if isinstance(atom, Not):
        return "not(%s)" % ", ".join(print_atom(a) for a in atom.atoms)
    if isinstance(atom, Count):
        group = ""
        if atom.group_by:
            group = " groupBy(%s)" % ", ".join(str(v) for v in atom.group_by)
        return "count(%s over (%s)%s) %s %d" % (
            atom.var,
            ", ".join(print_atom(a) for a in atom.atoms),
            group,
            atom.comparator,
            atom.bound,
        )
    raise TypeError(f"not a body atom: {atom!r}")


def print_rule(rule: Rule) -> str:
    return "%s :- %s." % (
        print_atom(rule.head),
        ", ".join(print_atom(a) for a in rule.body),
    )


def print_rules(rules: Sequence[Rule]) -> str:
    return "\n".join(print_rule(r) for r in rules) + ("\n" if rules else "")


def print_constraint(c: Constraint) -> str:
    header = "constraint %d %s phase=%s kind=%s tag=%s report(%s)" % (
        c.id,
        c.label,
        c.phase,
        c.kind,
        c.tag,
        ", ".join(str(v) for v in c.report),
    )
    clauses = " ; ".join(", ".join(print_atom(a) for a in clause) for clause in c.clauses)
    return "%s { %s }" % (header, clauses)


def print_constraints(catalog: Sequence[Constraint]) -> str:
    return "\n".join(print_constraint(c) for c in catalog) + ("\n" if catalog else "")
