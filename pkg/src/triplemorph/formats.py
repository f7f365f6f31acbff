"""Reading and writing models as triple files.

Two concrete syntaxes are supported:

* N-Triples (``.nt``): the exchange format.  Serialization is canonical —
  one triple per line, lines sorted lexicographically, explicit datatypes,
  ``\\n`` line endings — so equal graphs produce byte-identical files.
* A Turtle subset (``.ttl``): authoring convenience with ``@prefix``,
  prefixed names, ``a``, and ``;``/``,`` continuations.  Parsing it yields
  exactly the graph its N-Triples expansion would.
"""

from __future__ import annotations

import re
from typing import Dict, Optional, Tuple

from .graph import Graph
from .terms import XSD_STRING, Iri, Literal, Term, Triple, escape_literal

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"


class ParseError(ValueError):
    """Syntax error with 1-based line and column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.reason = message


_UNESCAPES = {
    "\\": "\\",
    '"': '"',
    "n": "\n",
    "r": "\r",
    "t": "\t",
}


class _LineScanner:
    """Character scanner over one line, tracking column for error reports."""

    def __init__(self, text: str, lineno: int):
        self.text = text
        self.pos = 0
        self.lineno = lineno

    def error(self, message: str, pos: Optional[int] = None):
        raise ParseError(message, self.lineno, (self.pos if pos is None else pos) + 1)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def iri(self) -> Iri:
        start = self.pos
        if self.peek() != "<":
            self.error("expected '<'")
        end = self.text.find(">", self.pos)
        if end < 0:
            self.error("unterminated IRI (missing '>')", start)
        value = self.text[self.pos + 1 : end]
        self.pos = end + 1
        try:
            return Iri(value)
        except ValueError as e:
            self.error(str(e), start)

    def literal(self) -> Literal:
        start = self.pos
        assert self.peek() == '"'
        self.pos += 1
        out = []
        while True:
            if self.pos >= len(self.text):
                self.error("unterminated literal", start)
            c = self.text[self.pos]
            if c == '"':
                self.pos += 1
                break
            if c == "\\":
                self.pos += 1
                if self.pos >= len(self.text):
                    self.error("bad escape at end of line")
                e = self.text[self.pos]
                if e in _UNESCAPES:
                    out.append(_UNESCAPES[e])
                    self.pos += 1
                elif e == "u":
                    hexs = self.text[self.pos + 1 : self.pos + 5]
                    if len(hexs) < 4 or not re.fullmatch(r"[0-9A-Fa-f]{4}", hexs):
                        self.error("bad \\u escape")
                    out.append(chr(int(hexs, 16)))
                    self.pos += 5
                else:
                    self.error(f"bad escape '\\{e}' in literal")
            else:
                out.append(c)
                self.pos += 1
        datatype = Iri(XSD_STRING)
        if self.text.startswith("^^", self.pos):
            self.pos += 2
            datatype = self.iri()
        try:
            return Literal("".join(out), datatype)
        except ValueError as e:
            self.error(str(e), start)


def parse_ntriples(text: str, source_name: str = "<string>") -> Graph:
    """Parse line-oriented N-Triples; '#' comment lines and blanks allowed."""
    g = Graph()
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        sc = _LineScanner(raw, lineno)
        sc.skip_ws()
        if sc.peek() == '"':
            sc.error("literal in subject position")
        subject = sc.iri()
        sc.skip_ws()
        if sc.peek() == '"':
            sc.error("literal in predicate position")
        predicate = sc.iri()
        sc.skip_ws()
        if sc.peek() == '"':
            obj: Term = sc.literal()
        elif sc.peek() == "<":
            obj = sc.iri()
        else:
            sc.error("expected IRI or literal object")
        sc.skip_ws()
        if sc.peek() != ".":
            sc.error("expected terminal '.'")
        sc.pos += 1
        sc.skip_ws()
        if sc.pos < len(sc.text) and sc.peek() != "#":
            sc.error("trailing content after '.'")
        g.insert(Triple(subject, predicate, obj))
    return g


def serialize_ntriples(graph: Graph) -> str:
    """Canonical N-Triples: sorted lines, explicit datatypes, '\\n' endings."""
    triples = graph.triples()
    if not triples:
        return ""
    return "\n".join(t.n3() for t in triples) + "\n"


# -- Turtle subset ---------------------------------------------------------

_TTL_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<prefix_kw>@prefix\b)
  | (?P<iriref><[^>\s]*>)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<dtype>\^\^)
  | (?P<pname>[A-Za-z_][A-Za-z0-9_-]*:[A-Za-z0-9_][A-Za-z0-9_.-]*)
  | (?P<prefix_decl>[A-Za-z_][A-Za-z0-9_-]*:)
  | (?P<kw_a>\ba\b)
  | (?P<punct>[.;,])
    """,
    re.VERBOSE,
)


class _TtlTokenizer:
    def __init__(self, text: str):
        self.tokens: list[Tuple[str, str, int, int]] = []
        line, col = 1, 1
        pos = 0
        while pos < len(text):
            m = _TTL_TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {text[pos]!r}", line, col)
            kind = m.lastgroup
            value = m.group()
            # a pname may not end with '.': trailing dots are terminators
            if kind == "pname":
                stripped = value.rstrip(".")
                if stripped != value:
                    extra = len(value) - len(stripped)
                    value = stripped
                    m_end = m.end() - extra
                else:
                    m_end = m.end()
            else:
                m_end = m.end()
            if kind not in ("ws", "comment"):
                self.tokens.append((kind, value, line, col))
            consumed = text[pos:m_end]
            nl = consumed.count("\n")
            if nl:
                line += nl
                col = len(consumed) - consumed.rfind("\n")
            else:
                col += len(consumed)
            pos = m_end
        self.tokens.append(("eof", "", line, col))
        self.index = 0

    def peek(self):
        return self.tokens[self.index]

    def next(self):
        tok = self.tokens[self.index]
        if tok[0] != "eof":
            self.index += 1
        return tok

    def error(self, message: str, tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok[2], tok[3])


class _TtlParser:
    def __init__(self, text: str):
        self.tz = _TtlTokenizer(text)
        self.prefixes: Dict[str, str] = {}
        self.graph = Graph()

    def parse(self) -> Graph:
        while self.tz.peek()[0] != "eof":
            if self.tz.peek()[0] == "prefix_kw":
                self._prefix_decl()
            else:
                self._statement()
        self.graph.prefixes.update(self.prefixes)
        return self.graph

    def _expect(self, kind: str, what: str):
        tok = self.tz.next()
        if tok[0] != kind:
            self.tz.error(f"expected {what}", tok)
        return tok

    def _expect_punct(self, char: str):
        tok = self.tz.next()
        if tok[0] != "punct" or tok[1] != char:
            self.tz.error(f"expected '{char}'", tok)

    def _prefix_decl(self):
        self.tz.next()  # @prefix
        tok = self.tz.next()
        if tok[0] == "prefix_decl":
            prefix = tok[1][:-1]
        elif tok[0] == "pname" and tok[1].endswith(":"):
            prefix = tok[1][:-1]
        else:
            self.tz.error("expected prefix name", tok)
        iri_tok = self._expect("iriref", "namespace IRI")
        self._expect_punct(".")
        self.prefixes[prefix] = iri_tok[1][1:-1]

    def _resource(self) -> Iri:
        tok = self.tz.next()
        if tok[0] == "iriref":
            try:
                return Iri(tok[1][1:-1])
            except ValueError as e:
                self.tz.error(str(e), tok)
        if tok[0] == "kw_a":
            return Iri(RDF_NS + "type")
        if tok[0] == "pname":
            prefix, local = tok[1].split(":", 1)
            if prefix not in self.prefixes:
                self.tz.error(f"undefined prefix {prefix}", tok)
            return Iri(self.prefixes[prefix] + local)
        self.tz.error("expected IRI or prefixed name", tok)

    def _object(self) -> Term:
        tok = self.tz.peek()
        if tok[0] == "string":
            self.tz.next()
            lexical = _unescape_string(tok, self.tz)
            datatype = Iri(XSD_STRING)
            if self.tz.peek()[0] == "dtype":
                self.tz.next()
                datatype = self._resource()
            try:
                return Literal(lexical, datatype)
            except ValueError as e:
                self.tz.error(str(e), tok)
        return self._resource()

    def _statement(self):
        subject = self._resource()
        while True:
            predicate = self._resource()
            while True:
                obj = self._object()
                self.graph.insert(Triple(subject, predicate, obj))
                if self.tz.peek()[:2] == ("punct", ","):
                    self.tz.next()
                    continue
                break
            tok = self.tz.next()
            if tok[:2] == ("punct", ";"):
                # allow a trailing ';' before the final '.'
                if self.tz.peek()[:2] == ("punct", "."):
                    self.tz.next()
                    return
                continue
            if tok[:2] == ("punct", "."):
                return
            self.tz.error("expected ';', ',' or '.'", tok)


def _unescape_string(tok, tz) -> str:
    body = tok[1][1:-1]
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\":
            e = body[i + 1]
            if e in _UNESCAPES:
                out.append(_UNESCAPES[e])
                i += 2
            elif e == "u":
                hexs = body[i + 2 : i + 6]
                if len(hexs) < 4 or not re.fullmatch(r"[0-9A-Fa-f]{4}", hexs):
                    tz.error("bad \\u escape", tok)
                out.append(chr(int(hexs, 16)))
                i += 6
            else:
                tz.error(f"bad escape '\\{e}' in literal", tok)
        else:
            out.append(c)
            i += 1
    return "".join(out)


def parse_turtle_subset(text: str, source_name: str = "<string>") -> Graph:
    """Parse the supported Turtle subset into a graph."""
    return _TtlParser(text).parse()


def load_model(path: str) -> Graph:
    """Load a model file, dispatching on extension (.ttl → Turtle subset,
    anything else → N-Triples)."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".ttl"):
        return parse_turtle_subset(text, path)
    return parse_ntriples(text, path)
