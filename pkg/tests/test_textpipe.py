import pytest

from sqltutor.errors import EmptyQuery
from sqltutor.textpipe import (
    KIND_NUMBER,
    KIND_QUOTED,
    Lemmatizer,
    TextPipeline,
    join_compounds,
    parse_quantity,
    strip_wake_phrase,
    tokenize,
)


def surfaces(tokens):
    return [t.surface for t in tokens]


def test_tokenize_simple():
    toks = tokenize("Tracks, please.")
    assert surfaces(toks) == ["Tracks", ",", "please", "."]
    assert [t.position for t in toks] == [1, 2, 3, 4]


def test_tokenize_number():
    toks = tokenize("the track id is 1479")
    assert toks[-1].kind == KIND_NUMBER
    assert toks[-1].numeric_value == 1479


def test_tokenize_number_with_thousands_separators():
    toks = tokenize("more than 2,000,000 copies")
    nums = [t for t in toks if t.kind == KIND_NUMBER]
    assert len(nums) == 1 and nums[0].numeric_value == 2_000_000


def test_tokenize_quoted_literal():
    toks = tokenize("composer 'Jimi Hendrix' please")
    quoted = [t for t in toks if t.kind == KIND_QUOTED]
    assert len(quoted) == 1
    assert quoted[0].surface == "Jimi Hendrix"
    assert quoted[0].entity


def test_tokenize_empty_raises():
    with pytest.raises(EmptyQuery):
        tokenize("   ")


def test_wake_phrase_stripped():
    assert strip_wake_phrase("Hey Tutor, show me tracks") == "show me tracks"
    assert strip_wake_phrase("Hey Ada, hello") == "hello"
    assert strip_wake_phrase("They say hey sometimes") == "They say hey sometimes"


class TestLemmatizer:
    @pytest.fixture()
    def lem(self):
        return TextPipeline().lemmatizer

    @pytest.mark.parametrize("word,lemma", [
        ("am", "be"), ("are", "be"), ("is", "be"),
        ("was", "be"), ("were", "be"),
        ("has", "have"), ("does", "do"),
        ("cars", "car"),
        ("running", "run"),
        ("composed", "compose"),
        ("tracks", "track"),
        ("ids", "id"),
        ("copies", "copy"),
        ("sold", "sell"),
        ("boy's", "boy"),
        ("different", "differ"),
    ])
    def test_lemmas(self, lem, word, lemma):
        assert lem.lemma(word) == lemma

    def test_full_sentence(self, lem):
        words = "the boy's cars are different colors".split()
        assert [lem.lemma(w) for w in words] == [
            "the", "boy", "car", "be", "differ", "color"
        ]

    def test_idempotent(self, lem):
        for w in ["running", "tracks", "composed", "copies", "are"]:
            once = lem.lemma(w)
            assert lem.lemma(once) == once


def test_compound_capitalized_run(pipeline):
    q = pipeline.process("collapse San Francisco now")
    entities = [t for t in q.tokens if t.entity]
    assert [e.surface for e in entities] == ["San Francisco"]


def test_compound_jimi_hendrix_positions(pipeline):
    q = pipeline.process("Show me the tracks composed by Jimi Hendrix")
    entity = next(t for t in q.tokens if t.entity)
    assert entity.surface == "Jimi Hendrix"
    assert (entity.position, entity.end_position) == (7, 8)


def test_compound_bridge_word(pipeline):
    q = pipeline.process("the artist Gone is Gone has recorded")
    entity = next(t for t in q.tokens if t.entity)
    assert entity.surface == "Gone is Gone"


def test_compound_not_sentence_initial(pipeline):
    q = pipeline.process("Tracks, please.")
    assert not any(t.entity for t in q.tokens)


def test_compound_stops_at_preposition(pipeline):
    q = pipeline.process("albums distributed by Redeye Distribution in USA")
    entities = [t.surface for t in q.tokens if t.entity]
    assert entities == ["Redeye Distribution", "USA"]


def test_capitalized_stop_word_not_entity(pipeline):
    q = pipeline.process("show me all of the tracks I've got")
    assert not any(t.entity for t in q.tokens)


def test_quantity_two_million(pipeline):
    q = pipeline.process("sold more than 2 million copies")
    nums = [t for t in q.tokens if t.numeric_value is not None]
    assert len(nums) == 1 and nums[0].numeric_value == 2_000_000


def test_quantity_word_number(pipeline):
    q = pipeline.process("show five tracks")
    nums = [t for t in q.tokens if t.numeric_value is not None]
    assert len(nums) == 1 and nums[0].numeric_value == 5


def test_stop_words_marked(pipeline):
    q = pipeline.process("Show me the tracks")
    by_surface = {t.surface: t for t in q.tokens}
    assert by_surface["me"].is_stop
    assert by_surface["the"].is_stop
    assert not by_surface["tracks"].is_stop
    assert not by_surface["Show"].is_stop


def test_content_tokens_drop_stops_and_punct(pipeline):
    q = pipeline.process("Show me the tracks, please.")
    assert [t.surface for t in q.content_tokens()] == ["Show", "tracks"]


def test_tags(pipeline):
    q = pipeline.process("Show tracks composed by top artists")
    tags = {t.surface: t.tag for t in q.tokens}
    assert tags["Show"] == "verb"
    assert tags["composed"] == "verb"
    assert tags["tracks"] == "noun"
    assert tags["artists"] == "noun"
    assert tags["top"] == "adjective"
    assert tags["by"] == "stop"
