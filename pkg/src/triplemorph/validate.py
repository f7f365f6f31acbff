"""Constraint checking and violation reports.

A constraint body is a query whose satisfying bindings are the violations:
an empty result means the requirement holds.  Source-phase constraints read
only the source graph, target-phase only the target, and cross-phase
constraints are evaluated over the union of both (the two meta-model
namespaces are disjoint, so patterns pick the right side by predicate).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .engine import evaluate_body
from .graph import Binding, Graph
from .lang import Constraint
from .terms import Term


class ValidationError(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    constraint_id: int
    label: str
    witness: Tuple[Tuple[str, Term], ...]  # (variable name, term), report order

    def witness_dict(self) -> Dict[str, Term]:
        return dict(self.witness)


@dataclass
class ValidationReport:
    phase: str
    checked: List[int] = field(default_factory=list)
    violations: List[Violation] = field(default_factory=list)
    by_kind: Dict[str, int] = field(default_factory=dict)
    by_tag: Dict[str, int] = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return not self.violations


def _phase_graph(source: Graph, target: Optional[Graph], phase: str, cid: int) -> Graph:
    if phase == "source":
        return source
    if target is None:
        raise ValidationError(f"target graph required for constraint id {cid}")
    if phase == "target":
        return target
    return source.union(target)


def check(source: Graph, target: Optional[Graph], c: Constraint) -> List[Violation]:
    """One violation per distinct witness binding, deterministic order."""
    graph = _phase_graph(source, target, c.phase, c.id)
    witnesses = []
    seen = set()
    for clause in c.clauses:
        for binding in evaluate_body(graph, clause):
            w = tuple((v.name, binding[v.name]) for v in c.report)
            key = tuple((name, t.n3()) for name, t in w)
            if key not in seen:
                seen.add(key)
                witnesses.append((key, w))
    witnesses.sort(key=lambda kw: kw[0])
    return [Violation(c.id, c.label, w) for _, w in witnesses]


def check_catalog(
    source: Graph,
    target: Optional[Graph],
    catalog: Sequence[Constraint],
    phase: str,
) -> ValidationReport:
    """Check every constraint of one phase; constraints are independent and
    evaluation never short-circuits."""
    report = ValidationReport(phase=phase)
    for c in catalog:
        if c.phase != phase:
            continue
        report.checked.append(c.id)
        found = check(source, target, c)
        report.violations.extend(found)
        if found:
            report.by_kind[c.kind] = report.by_kind.get(c.kind, 0) + len(found)
            report.by_tag[c.tag] = report.by_tag.get(c.tag, 0) + len(found)
    return report


# -- rendering -------------------------------------------------------------


def format_lines(report: ValidationReport) -> str:
    """Line-oriented machine format: one VIOLATION line per violation plus
    a SUMMARY line."""
    out = []
    for v in report.violations:
        parts = " ".join(f"{name}={term.n3()}" for name, term in v.witness)
        out.append(f"VIOLATION {v.constraint_id} {v.label} {parts}".rstrip())
    out.append(
        "SUMMARY phase=%s checked=%d violations=%d"
        % (report.phase, len(report.checked), len(report.violations))
    )
    return "\n".join(out) + "\n"


def format_text(
    report: ValidationReport,
    prefixes: Optional[Mapping[str, str]] = None,
) -> str:
    """Human-readable report; witness terms get a prefixed short form next
    to the full IRI where a prefix applies."""
    shorten_graph = Graph(prefixes or {})
    out = [f"Validation report — phase {report.phase}"]
    out.append(f"  constraints checked: {len(report.checked)}")
    if report.valid:
        out.append("  no violations")
    else:
        out.append(f"  violations: {len(report.violations)}")
        for v in report.violations:
            out.append(f"  [{v.constraint_id}] {v.label}")
            for name, term in v.witness:
                short = shorten_graph.shorten(term)
                full = term.n3()
                if short != full:
                    out.append(f"      ?{name} = {short}  ({full})")
                else:
                    out.append(f"      ?{name} = {full}")
        if report.by_kind or report.by_tag:
            kinds = ", ".join(f"{k}={n}" for k, n in sorted(report.by_kind.items()))
            tags = ", ".join(f"{k}={n}" for k, n in sorted(report.by_tag.items()))
            out.append(f"  by kind: {kinds or '-'}; by tag: {tags or '-'}")
    return "\n".join(out) + "\n"
