import random

import pytest

import brute
from gen import rand_constraint, rand_graph
from mutations import MUTATIONS
from triplemorph.assets import PREFIXES, asset_text
from triplemorph.engine import count_eval
from triplemorph.graph import Graph, TriplePattern, Var
from triplemorph.lang import Count, parse_constraints
from triplemorph.terms import Iri, Triple, string
from triplemorph.validate import (
    ValidationError,
    Violation,
    check,
    check_catalog,
    format_lines,
    format_text,
)

A = "http://metamodelA.ecore#"


def _constraint(catalog, cid):
    return next(c for c in catalog if c.id == cid)


# -- check -----------------------------------------------------------------


def test_clean_case_study_constraint_1(case_study):
    c = _constraint(case_study.constraints, 1)
    assert check(case_study.source, None, c) == []


def test_mutated_case_study_constraint_1(case_study):
    c = _constraint(case_study.constraints, 1)
    mutated = case_study.source.copy()
    MUTATIONS[0].mutate(mutated)
    found = check(mutated, None, c)
    assert found
    assert all(v.constraint_id == 1 for v in found)
    # engine and oracle agree on the exact witness set
    got = {tuple((n, t.n3()) for n, t in v.witness) for v in found}
    assert got == brute.brute_check(mutated, c)


def test_witness_restricted_to_report_vars(case_study):
    mutated = case_study.source.copy()
    MUTATIONS[1].mutate(mutated)  # second key on Student
    c = _constraint(case_study.constraints, 2)
    found = check(mutated, None, c)
    assert len(found) == 1
    names = [n for n, _ in found[0].witness]
    assert names == [v.name for v in c.report]


def test_violations_sorted_and_deduped():
    catalog = parse_constraints(
        "@prefix e: <http://e#> .\n"
        "constraint 1 dup phase=source kind=SC tag=WF report(?s) {\n"
        "  (?s, e:p, ?o) ; (?s, e:p, ?o)\n"
        "}\n"
    )
    g = Graph()
    g.insert(Triple(Iri("http://e#b"), Iri("http://e#p"), string("1")))
    g.insert(Triple(Iri("http://e#a"), Iri("http://e#p"), string("1")))
    found = check(g, None, catalog[0])
    subjects = [v.witness[0][1].value for v in found]
    assert subjects == ["http://e#a", "http://e#b"]


def test_target_phase_requires_target(case_study):
    c = _constraint(case_study.constraints, 20)
    with pytest.raises(ValidationError) as exc:
        check(case_study.source, None, c)
    assert "target graph required for constraint id 20" in str(exc.value)


def test_cross_phase_sees_both_graphs(case_study, transformed):
    # constraint 30 justifies every target key/col name by a source
    # attribute; with an empty source every such name becomes a violation
    c = _constraint(case_study.constraints, 30)
    assert check(case_study.source, transformed.target, c) == []
    assert check(Graph(), transformed.target, c)


# -- count_eval ------------------------------------------------------------


def _count_atom(comparator, bound):
    return Count(
        Var("k"),
        (TriplePattern(Var("d"), Iri(A + "data.attr_of"), Var("k")),),
        comparator,
        bound,
        (Var("d"),),
    )


def test_count_eval_comparators(case_study):
    binding = {"d": Iri(A + "02_Student_data")}
    assert count_eval(case_study.source, _count_atom("=", 3), binding)
    assert not count_eval(case_study.source, _count_atom("=", 2), binding)
    assert count_eval(case_study.source, _count_atom(">", 2), binding)
    assert count_eval(case_study.source, _count_atom("<=", 3), binding)
    assert count_eval(case_study.source, _count_atom("!=", 0), binding)


def test_count_eval_empty_inner_is_zero(case_study):
    binding = {"d": Iri(A + "01_DB_Students_store")}
    assert count_eval(case_study.source, _count_atom("=", 0), binding)


def test_count_eval_unbound_group_by(case_study):
    with pytest.raises(Exception) as exc:
        count_eval(case_study.source, _count_atom("=", 0), {})
    assert "unbound groupBy variable ?d" in str(exc.value)


# -- check_catalog ---------------------------------------------------------


def test_catalog_source_phase_counts(case_study):
    report = check_catalog(case_study.source, None, case_study.constraints, "source")
    assert len(report.checked) == 16
    assert report.valid
    assert report.by_kind == {} and report.by_tag == {}


def test_catalog_target_and_cross_counts(case_study, transformed):
    target_report = check_catalog(case_study.source, transformed.target, case_study.constraints, "target")
    cross_report = check_catalog(case_study.source, transformed.target, case_study.constraints, "cross")
    assert len(target_report.checked) + len(cross_report.checked) == 17
    assert target_report.valid and cross_report.valid


def test_catalog_ids_cover_1_to_33(case_study):
    assert sorted(c.id for c in case_study.constraints) == list(range(1, 34))


def test_catalog_kind_tag_tallies(case_study):
    mutated = case_study.source.copy()
    MUTATIONS[0].mutate(mutated)
    report = check_catalog(mutated, None, case_study.constraints, "source")
    assert not report.valid
    assert sum(report.by_kind.values()) == len(report.violations)
    assert sum(report.by_tag.values()) == len(report.violations)


def test_alt_catalog_flags_renamed_foreign(case_study, transformed):
    """The stricter id-20 variant must still hold on the clean case study."""
    alt = parse_constraints(asset_text("requirements_alt.mtc"))
    assert [c.id for c in alt] == [20]
    assert check(case_study.source, transformed.target, alt[0]) == []
    mutated = transformed.target.copy()
    MUTATIONS[6].mutate(mutated)
    assert check(case_study.source, mutated, alt[0])


# -- rendering -------------------------------------------------------------


def _sample_report(case_study):
    mutated = case_study.source.copy()
    MUTATIONS[1].mutate(mutated)
    return check_catalog(mutated, None, case_study.constraints, "source"), mutated


def test_format_lines_shape(case_study):
    report, _ = _sample_report(case_study)
    lines = format_lines(report).splitlines()
    assert lines[-1] == "SUMMARY phase=source checked=16 violations=%d" % len(report.violations)
    for line in lines[:-1]:
        assert line.startswith("VIOLATION ")
        assert "=" in line


def test_format_lines_clean(case_study):
    report = check_catalog(case_study.source, None, case_study.constraints, "source")
    assert format_lines(report) == "SUMMARY phase=source checked=16 violations=0\n"


def test_format_text_shortens_with_prefixes(case_study):
    report, _ = _sample_report(case_study)
    text = format_text(report, PREFIXES)
    assert "phase source" in text
    assert "mmA:" in text  # short form shown when a prefix applies
    assert "by kind:" in text


# -- randomized cross-check ------------------------------------------------


def test_random_constraints_match_brute_force():
    rng = random.Random(31)
    for _ in range(40):
        g = rand_graph(rng, max_triples=20)
        c = rand_constraint(rng)
        found = check(g, None, c)
        got = {tuple((n, t.n3()) for n, t in v.witness) for v in found}
        assert got == brute.brute_check(g, c)
