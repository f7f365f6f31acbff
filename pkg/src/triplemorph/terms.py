"""Core term model: IRIs, typed literals and triples.

Everything downstream (graphs, rules, constraints) is built from these three
frozen types.  There are deliberately no blank nodes: every model element is
named by an absolute IRI, which keeps equality and serialization trivial.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

XSD = "http://www.w3.org/2001/XMLSchema#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"

XSD_STRING = XSD + "string"
XSD_BOOLEAN = XSD + "boolean"
XSD_INTEGER = XSD + "integer"

# IRIs without a "://" that we still accept (urn: scheme and relative-free
# vocabulary identifiers would land here; in practice only urn: shows up).
_SCHEME_SEP = "://"

_ESCAPES = {
    "\\": "\\\\",
    '"': '\\"',
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
}


def escape_literal(text: str) -> str:
    return "".join(_ESCAPES.get(c, c) for c in text)


@dataclass(frozen=True, order=True)
class Iri:
    value: str

    def __post_init__(self):
        if not self.value:
            raise ValueError("empty IRI")
        if _SCHEME_SEP not in self.value and not self.value.startswith("urn:"):
            raise ValueError(f"not an absolute IRI: {self.value!r}")

    @property
    def local(self) -> str:
        """Local fragment: after the last '#', else after the last '/'."""
        if "#" in self.value:
            return self.value.rsplit("#", 1)[1]
        return self.value.rsplit("/", 1)[1]

    @property
    def namespace(self) -> str:
        if "#" in self.value:
            return self.value.rsplit("#", 1)[0] + "#"
        return self.value.rsplit("/", 1)[0] + "/"

    def n3(self) -> str:
        return f"<{self.value}>"

    def __str__(self):
        return self.value


@dataclass(frozen=True, order=True)
class Literal:
    lexical: str
    datatype: Iri = Iri(XSD_STRING)

    def __post_init__(self):
        if self.datatype.value == XSD_BOOLEAN and self.lexical not in ("true", "false"):
            raise ValueError(f"bad boolean lexical form: {self.lexical!r}")

    def n3(self) -> str:
        return f'"{escape_literal(self.lexical)}"^^{self.datatype.n3()}'

    def __str__(self):
        return self.lexical


Term = Union[Iri, Literal]


def string(text: str) -> Literal:
    return Literal(text, Iri(XSD_STRING))


def boolean(value: bool) -> Literal:
    return Literal("true" if value else "false", Iri(XSD_BOOLEAN))


TRUE = Literal("true", Iri(XSD_BOOLEAN))
FALSE = Literal("false", Iri(XSD_BOOLEAN))
RDF_TYPE = Iri(RDF + "type")


@dataclass(frozen=True, order=True)
class Triple:
    subject: Iri
    predicate: Iri
    object: Term

    def __post_init__(self):
        if not isinstance(self.subject, Iri):
            raise ValueError("triple subject must be an IRI")
        if not isinstance(self.predicate, Iri):
            raise ValueError("triple predicate must be an IRI")
        if not isinstance(self.object, (Iri, Literal)):
            raise ValueError("triple object must be an IRI or literal")

    def n3(self) -> str:
        return f"{self.subject.n3()} {self.predicate.n3()} {self.object.n3()} ."

    def sort_key(self):
        return (self.subject.n3(), self.predicate.n3(), self.object.n3())
