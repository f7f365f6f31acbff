"""Packaged case-study assets and their loader.

Ships the ER→RM case study as data: the source and target meta-model
vocabularies, the source object model, the transformation rule set and the
33-item requirement catalog.  ``lint_assets`` is the release gate: it
verifies vocabulary closure, rule safety and catalog completeness.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Dict, List, Optional, Set, Tuple

from ..formats import ParseError, parse_ntriples
from ..graph import Graph, TriplePattern, Var
from ..lang import BodyAtom, Constraint, Count, Not, Rule, parse_constraints, parse_rules
from ..terms import RDF, RDFS, Iri, Triple

MM_A = "http://metamodelA.ecore#"
MM_B = "http://metamodelB.ecore#"

PREFIXES = {
    "mmA": MM_A,
    "mmB": MM_B,
    "rdf": RDF,
    "xsd": "http://www.w3.org/2001/XMLSchema#",
}

FILES = (
    "source_mm.nt",
    "target_mm.nt",
    "case_study.nt",
    "er2rm.mtr",
    "requirements.mtc",
    "requirements_alt.mtc",
)


class AssetError(ValueError):
    pass


def asset_text(name: str) -> str:
    return (resources.files(__package__) / name).read_text(encoding="utf-8")


def asset_path(name: str) -> str:
    return str(resources.files(__package__) / name)


@dataclass
class CaseStudy:
    source: Graph
    rules: List[Rule]
    constraints: List[Constraint]
    source_vocabulary: Graph
    target_vocabulary: Graph


def load_case_study() -> CaseStudy:
    """Load the packaged source model, rule set and constraint catalog."""
    texts = {name: asset_text(name) for name in FILES}
    try:
        source = parse_ntriples(texts["case_study.nt"], "case_study.nt")
        source_mm = parse_ntriples(texts["source_mm.nt"], "source_mm.nt")
        target_mm = parse_ntriples(texts["target_mm.nt"], "target_mm.nt")
        rules = parse_rules(texts["er2rm.mtr"])
        constraints = parse_constraints(texts["requirements.mtc"])
    except ParseError as e:
        raise AssetError(f"corrupt asset: {e}") from e
    source.prefixes.update(PREFIXES)
    source_mm.prefixes.update(PREFIXES)
    target_mm.prefixes.update(PREFIXES)
    return CaseStudy(source, rules, constraints, source_mm, target_mm)


# -- linting ---------------------------------------------------------------

_RDF_TYPE = Iri(RDF + "type")
_RDFS_CLASS = Iri(RDFS + "Class")
_RDF_PROPERTY = Iri(RDF + "Property")


def _declared(vocab: Graph) -> Tuple[Set[str], Set[str]]:
    classes = {
        t.subject.value
        for t in vocab
        if t.predicate == _RDF_TYPE and t.object == _RDFS_CLASS
    }
    properties = {
        t.subject.value
        for t in vocab
        if t.predicate == _RDF_TYPE and t.object == _RDF_PROPERTY
    }
    return classes, properties


def _check_graph_closure(
    graph: Graph, classes: Set[str], properties: Set[str], where: str
) -> List[str]:
    findings = []
    for t in sorted(graph, key=Triple.sort_key):
        if t.predicate == _RDF_TYPE:
            if isinstance(t.object, Iri) and t.object.value not in classes:
                findings.append(f"{where}: undeclared class {t.object.n3()}")
        elif t.predicate.value not in properties:
            findings.append(f"{where}: undeclared property {t.predicate.n3()}")
    return findings


def _pattern_closure(
    atom: TriplePattern, classes: Set[str], properties: Set[str], where: str
) -> List[str]:
    findings = []
    p = atom.predicate
    if isinstance(p, Iri):
        if p == _RDF_TYPE:
            o = atom.object
            if isinstance(o, Iri) and o.value not in classes:
                findings.append(f"{where}: undeclared class {o.n3()}")
        elif p.value not in properties:
            findings.append(f"{where}: undeclared property {p.n3()}")
    return findings


def _atom_closure(atom: BodyAtom, classes, properties, where) -> List[str]:
    findings = []
    if isinstance(atom, TriplePattern):
        findings += _pattern_closure(atom, classes, properties, where)
    elif isinstance(atom, (Not, Count)):
        for a in atom.atoms:
            findings += _atom_closure(a, classes, properties, where)
    return findings


def lint_assets(overrides: Optional[Dict[str, str]] = None) -> List[str]:
    """Verify vocabulary closure, rule/constraint parseability and catalog
    id completeness.  Returns findings (empty for a healthy release)."""
    texts = {name: asset_text(name) for name in FILES}
    if overrides:
        texts.update(overrides)
    findings: List[str] = []

    graphs: Dict[str, Graph] = {}
    for name in ("source_mm.nt", "target_mm.nt", "case_study.nt"):
        try:
            graphs[name] = parse_ntriples(texts[name], name)
        except ParseError as e:
            findings.append(f"{name}: {e}")
    if findings:
        return findings

    src_classes, src_props = _declared(graphs["source_mm.nt"])
    tgt_classes, tgt_props = _declared(graphs["target_mm.nt"])
    all_classes = src_classes | tgt_classes
    all_props = src_props | tgt_props

    findings += _check_graph_closure(
        graphs["case_study.nt"], src_classes, src_props, "case_study.nt"
    )

    try:
        rules = parse_rules(texts["er2rm.mtr"])
    except ParseError as e:
        findings.append(f"er2rm.mtr: {e}")
        rules = []
    for i, rule in enumerate(rules, start=1):
        where = f"er2rm.mtr rule {i}"
        findings += _pattern_closure(rule.head, tgt_classes, tgt_props, where + " head")
        for atom in rule.body:
            findings += _atom_closure(atom, src_classes, src_props, where)

    try:
        catalog = parse_constraints(texts["requirements.mtc"])
    except ParseError as e:
        findings.append(f"requirements.mtc: {e}")
        catalog = []
    if catalog:
        ids = {c.id for c in catalog}
        for missing in sorted(set(range(1, 34)) - ids):
            findings.append(f"requirements.mtc: missing constraint id {missing}")
        for extra in sorted(ids - set(range(1, 34))):
            findings.append(f"requirements.mtc: constraint id {extra} out of range 1-33")
        for c in catalog:
            where = f"requirements.mtc constraint {c.id}"
            for clause in c.clauses:
                for atom in clause:
                    findings += _atom_closure(atom, all_classes, all_props, where)
    return findings
