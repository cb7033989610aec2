"""Corpus-driven tests for the English-to-SQL generator."""

import pytest

from sqltutor.engine import execute, result_equal
from sqltutor.errors import AmbiguousLiteral, NoTableMatch
from sqltutor.generator import Translator, classify, translate_text
from sqltutor.parser import parse_sql
from sqltutor.sqlast import Contains, desugar_contains, render_sql, structurally_equal


def test_corpus_translations(corpus, catalog):
    failures = []
    for item in corpus:
        translation = translate_text(item["text"], catalog)
        expected = parse_sql(item["sql"])
        if not structurally_equal(translation.ast, expected):
            failures.append(
                f"#{item['id']}: got\n{render_sql(translation.ast)}\nwant\n{item['sql']}"
            )
        elif translation.query_class != item["class"]:
            failures.append(
                f"#{item['id']}: class {translation.query_class} != {item['class']}"
            )
    assert not failures, "\n\n".join(failures)


def test_corpus_execution_matches_expected_sql(corpus, catalog):
    for item in corpus:
        translation = translate_text(item["text"], catalog)
        got = execute(desugar_contains(translation.ast), catalog)
        want = execute(desugar_contains(parse_sql(item["sql"])), catalog)
        assert result_equal(got, want), f"#{item['id']} results differ"


@pytest.mark.parametrize("text,query_class", [
    ("Tracks, please.", "wildcard"),
    ("List the number and title of the songs.", "projection"),
    ("Get tracks composer Jimi Hendrix where the track id is 1479.", "selection"),
    (
        "List artists who recorded albums under all the labels artist "
        "Gone is Gone has ever recorded.",
        "division",
    ),
    (
        "Print the artists who sold more than 2 million copies of their "
        "albums in USA in 2017.",
        "aggregate",
    ),
])
def test_classification(catalog, text, query_class):
    assert classify_text(text, catalog) == query_class


def classify_text(text, catalog):
    from sqltutor.textpipe import TextPipeline

    return classify(TextPipeline().process(text), catalog)


def test_gibberish_raises_no_table_match(catalog):
    with pytest.raises(NoTableMatch):
        translate_text("qwxz flurb", catalog)


def test_no_table_match_carries_restate_hint(catalog):
    with pytest.raises(NoTableMatch) as exc:
        translate_text("qwxz flurb", catalog)
    assert "restate" in exc.value.hint.lower()


def test_quoted_literal_binds_by_cue(catalog):
    tr = translate_text("Show tracks where the composer is 'Jimi Hendrix'.", catalog)
    preds = {(p.column, p.value) for p in tr.predicates}
    assert ("Composer", "Jimi Hendrix") in preds


def test_quoted_literal_without_cue_is_ambiguous(catalog):
    # 'Gone is Gone' appears in both Artist and Composer columns
    with pytest.raises(AmbiguousLiteral):
        translate_text("Show tracks 'Gone is Gone'.", catalog)


def test_uncued_entity_dropped_as_context(catalog):
    tr = translate_text(
        "List top 5 ranked 2017 albums and artists distributed by "
        "Redeye Distribution in USA.",
        catalog,
    )
    assert [t.surface for t in tr.dropped_context] == ["USA"]
    assert all(p.value != "USA" for p in tr.predicates)


def test_top_n_binds_standing(catalog):
    tr = translate_text("Show albums that charted top 3 in 2016.", catalog)
    preds = {(p.column, p.op, p.value) for p in tr.predicates}
    assert ("Standing", "<=", 3) in preds
    assert ("Year", "=", 2016) in preds


def test_year_bound_by_value_scan(catalog):
    tr = translate_text("List the albums that charted in 2017.", catalog)
    assert {(p.column, p.value) for p in tr.predicates} == {("Year", 2017)}


def test_division_ast_shape(catalog):
    tr = translate_text(
        "List artists who recorded albums under all the labels artist "
        "Gone is Gone has ever recorded.",
        catalog,
    )
    assert tr.query_class == "division"
    pred = tr.ast.where[0]
    assert isinstance(pred, Contains)
    assert tr.ast.from_tables[0].alias == "t"
    # correlated side references the tuple variable
    corr = pred.left.where[0]
    assert corr.right.qualifier == "t"
    # constant side pins the anchor entity
    assert pred.right.where[0].right == "Gone is Gone"


def test_aggregate_ast_shape(catalog):
    tr = translate_text(
        "Print the artists who sold more than 2 million copies of their "
        "albums in USA in 2017.",
        catalog,
    )
    assert tr.ast.group_by == "Artist"
    assert tr.ast.having.op == ">"
    assert tr.ast.having.value == 2_000_000
    assert tr.ast.having.agg.fn == "SUM"
    assert tr.ast.having.agg.column == "Sales"


def test_named_comparator_on_hinted_column(catalog):
    tr = translate_text("Show tracks where the track id is more than 2000.", catalog)
    preds = {(p.column, p.op, p.value) for p in tr.predicates}
    assert ("TrackId", ">", 2000) in preds
    assert tr.ast.having is None


def test_diagnostics_payload(catalog):
    tr = translate_text("Tracks, please.", catalog)
    diag = tr.diagnostics()
    assert diag["selected_tables"] == ["tracks"]
    assert diag["query_class"] == "wildcard"
    assert "psi_scores" in diag and "table_triples" in diag


def test_translator_is_deterministic(corpus, catalog):
    translator = Translator(catalog)
    from sqltutor.textpipe import TextPipeline

    pipeline = TextPipeline()
    for item in corpus[:6]:
        q1 = translator.translate(pipeline.process(item["text"])).ast
        q2 = translator.translate(pipeline.process(item["text"])).ast
        assert q1 == q2
