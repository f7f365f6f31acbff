import pytest

from triplemorph.graph import Graph, TriplePattern, Var
from triplemorph.terms import RDF, Iri, Literal, Triple, boolean, string

MM_A = "http://metamodelA.ecore#"
RDF_TYPE = Iri(RDF + "type")


def t(s, p, o):
    return Triple(Iri(s), Iri(p), Iri(o) if isinstance(o, str) and "://" in o else o)


@pytest.fixture
def small():
    g = Graph()
    g.insert(t("http://a#s1", "http://a#p", "http://a#o1"))
    g.insert(t("http://a#s1", "http://a#p", "http://a#o2"))
    g.insert(t("http://a#s2", "http://a#q", string("x")))
    return g


def test_insert_into_empty():
    g = Graph()
    assert g.insert(t("http://a#s", "http://a#p", "http://a#o")) is True
    assert len(g) == 1


def test_insert_duplicate_returns_false():
    g = Graph()
    triple = t("http://a#s", "http://a#p", "http://a#o")
    assert g.insert(triple)
    assert g.insert(triple) is False
    assert len(g) == 1


def test_inserted_table_triple_matches_type_query():
    g = Graph()
    table = Iri(MM_A + "02_Student_datatable1")
    g.insert(Triple(table, RDF_TYPE, Iri("http://metamodelB.ecore#table")))
    bindings = g.match(TriplePattern(Var("x"), RDF_TYPE, Iri("http://metamodelB.ecore#table")))
    assert [b["x"] for b in bindings] == [table]


def test_contains_and_size(small):
    triple = t("http://a#s1", "http://a#p", "http://a#o1")
    assert triple in small
    assert t("http://a#s9", "http://a#p", "http://a#o1") not in Graph()
    assert len(small) == 3


def test_match_ground_pattern(small):
    pattern = TriplePattern(Iri("http://a#s1"), Iri("http://a#p"), Iri("http://a#o1"))
    seed = {"unrelated": string("v")}
    assert small.match(pattern, seed) == [seed]


def test_match_on_empty_graph():
    assert Graph().match(TriplePattern(Var("s"), Var("p"), Var("o"))) == []


def test_match_all_variables_enumerates_size(small):
    bindings = small.match(TriplePattern(Var("s"), Var("p"), Var("o")))
    assert len(bindings) == len(small)


def test_match_seed_substitution(small):
    pattern = TriplePattern(Var("s"), Iri("http://a#p"), Var("o"))
    bindings = small.match(pattern, {"s": Iri("http://a#s1")})
    assert len(bindings) == 2
    assert all(b["s"] == Iri("http://a#s1") for b in bindings)


def test_match_repeated_variable():
    g = Graph()
    g.insert(t("http://a#x", "http://a#p", "http://a#x"))
    g.insert(t("http://a#x", "http://a#p", "http://a#y"))
    bindings = g.match(TriplePattern(Var("v"), Iri("http://a#p"), Var("v")))
    assert len(bindings) == 1
    assert bindings[0]["v"] == Iri("http://a#x")


def test_match_anonymous_variable_binds_nothing(small):
    bindings = small.match(TriplePattern(Var("_"), Iri("http://a#p"), Var("_")))
    assert bindings == [{}, {}]


def test_index_consistency(small):
    pattern = TriplePattern(Iri("http://a#s1"), Var("p"), Var("o"))
    results = [small.match(pattern, force_index=ix) for ix in ("s", "p", "o", None)]
    assert results[0] == results[1] == results[2] == results[3]


def test_match_deterministic(small):
    pattern = TriplePattern(Var("s"), Var("p"), Var("o"))
    assert small.match(pattern) == small.match(pattern)


def test_reset_keeps_prefixes(small):
    small.prefixes["a"] = "http://a#"
    small.reset()
    assert len(small) == 0
    assert small.prefixes == {"a": "http://a#"}
    assert Graph().reset() == Graph()


def test_reset_and_reload_equals_fresh_parse():
    from triplemorph.assets import asset_text
    from triplemorph.formats import parse_ntriples

    text = asset_text("case_study.nt")
    g = parse_ntriples(text)
    g.reset()
    for triple in parse_ntriples(text):
        g.insert(triple)
    assert g == parse_ntriples(text)


def test_case_study_size_equals_line_count():
    from triplemorph.assets import asset_text
    from triplemorph.formats import parse_ntriples

    text = asset_text("case_study.nt")
    lines = [l for l in text.splitlines() if l.strip() and not l.startswith("#")]
    assert len(parse_ntriples(text)) == len(lines)


def test_literal_in_subject_position_rejected():
    with pytest.raises(ValueError):
        TriplePattern(string("oops"), Iri("http://a#p"), Var("o"))
    with pytest.raises(ValueError):
        Triple(Iri("http://a#s"), Iri("http://a#p"), "not a term")


def test_boolean_literal_validation():
    assert boolean(True).lexical == "true"
    with pytest.raises(ValueError):
        Literal("yes", Iri("http://www.w3.org/2001/XMLSchema#boolean"))


def test_iri_local_fragment():
    assert Iri("http://a/b#frag").local == "frag"
    assert Iri("http://a/b/last").local == "last"
    with pytest.raises(ValueError):
        Iri("")
    with pytest.raises(ValueError):
        Iri("no-scheme")
