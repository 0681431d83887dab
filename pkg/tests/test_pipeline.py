import io
import itertools
from decimal import Decimal

import pytest

from emoframe.corpus import Corpus, Publication, PublicationClass
from emoframe.errors import ConfigError, EmoframeError
from emoframe.lexicon import Lexicon
from emoframe.pipeline import (
    EmotionalizedDocument,
    EmotionMarker,
    PipelineConfig,
    QuantificationTable,
    Symbol,
    Word,
    characterize,
    classify,
    contrast,
    dump_emotionalized,
    emotionalize_corpus,
    emotionalize_word,
    feasible_mu_interval,
    load_emotionalized,
    quantify,
    run_pipeline,
)
from emoframe.preprocess import StopwordList, TokenizedDocument

FAKE, NOFAKE = PublicationClass.FAKE, PublicationClass.NOFAKE
UP, DOWN, EQ = Symbol.MORE_IN_FAKE, Symbol.LESS_IN_FAKE, Symbol.EQUAL
SEVEN = ("anger", "anticipation", "disgust", "fear", "joy", "sadness", "surprise")

# published per-domain percentages, (noFake, Fake)
PUBLISHED = {
    "politics": ["0.57 1.11", "0.42 0.42", "0.32 0.93", "0.77 1.84", "0.83 0.69", "0.48 1.33", "0.20 0.32"],
    "celebrities": ["0.72 0.90", "1.32 0.90", "0.42 0.38", "1.20 1.02", "3.29 2.22", "1.01 0.96", "0.5 0.31"],
    "covid-19": ["0.33 0.77", "0.45 0.49", "1.05 1.00", "2.56 3.05", "0.28 0.37", "1.63 1.79", "0.34 0.47"],
}


def published_table(domain):
    values = {e: tuple(Decimal(x) for x in pair.split()) for e, pair in zip(SEVEN, PUBLISHED[domain])}
    return QuantificationTable.from_percentages(domain, values)


# -- emotionalization -------------------------------------------------------

def test_emotionalize_word_threshold():
    lex = Lexicon.from_associations([("grim", "fear", 0.80)])
    assert emotionalize_word("grim", lex, 0.5) == [Word("grim"), EmotionMarker("fear")]
    assert emotionalize_word("grim", lex, 0.9) == [Word("grim")]
    assert emotionalize_word("other", lex, 0.0) == [Word("other")]


@pytest.mark.parametrize("intensity, tau", list(itertools.product([0.0, 0.3, 0.6, 1.0], [0.0, 0.3, 0.6, 1.0])))
def test_emotionalize_boundaries(intensity, tau):
    lex = Lexicon.from_associations([("w", "fear", intensity), ("w", "anger", intensity)])
    got = emotionalize_word("w", lex, tau)
    if intensity >= tau:
        assert got == [Word("w"), EmotionMarker("anger"), EmotionMarker("fear")]
    else:
        assert got == [Word("w")]


def test_emotionalize_corpus_basics(small_lexicon):
    assert emotionalize_corpus([], small_lexicon, 0.5) == []
    docs = [(TokenizedDocument("1", ("grim", "hope", "x")), FAKE)]
    out = emotionalize_corpus(docs, small_lexicon, 0.99)
    assert out[0].tokens == (Word("grim"), Word("hope"), Word("x"))
    out = emotionalize_corpus(docs, small_lexicon, 0.5)
    assert out[0].tokens == (Word("grim"), EmotionMarker("fear"), Word("hope"),
                             EmotionMarker("anticipation"), EmotionMarker("joy"), Word("x"))


def test_repeated_words_each_emit(small_lexicon):
    doc = emotionalize_corpus([(TokenizedDocument("1", ("grim", "grim")), FAKE)], small_lexicon, 0.5)[0]
    assert doc.markers() == ["fear", "fear"]


# -- quantification -----------------------------------------------------------

def doc(label, *tokens):
    return EmotionalizedDocument("d", label, tuple(tokens))


def test_quantify_direct_arithmetic():
    d = doc(FAKE, Word("a"), Word("b"), EmotionMarker("fear"), Word("c"), Word("d"))
    t = quantify([d], ("fear",))
    assert t.count("fear", FAKE) == 1
    assert t.word_counts[FAKE] == 4
    assert t.percentage("fear", FAKE) == 25.0
    assert t.degenerate == {NOFAKE}
    assert t.percentage("fear", NOFAKE) == 0.0


def test_quantify_no_markers():
    t = quantify([doc(FAKE, Word("a")), doc(NOFAKE, Word("b"))], SEVEN)
    assert all(v == 0 for v in t.percentages.values())
    assert not t.degenerate


def test_engineered_politics_anger():
    lex = Lexicon.from_associations([("rage", "anger", 1.0)])
    pubs = []
    for label, hits in ((NOFAKE, 57), (FAKE, 111)):
        for i in range(100):
            words = [f"{label.value}{i}w{k}" for k in range(100)]
            if i < hits:
                words[0] = "rage"
            if label is FAKE and i < 11:
                words[1] = "rage"
            pubs.append(Publication(f"{label.value}{i}", " ".join(words), label, "politics"))
    # Fake: 100 docs with one rage + 11 docs with a second -> 111 hits in 10 000 words
    res = run_pipeline(Corpus(tuple(pubs), "politics"), lex, config=PipelineConfig(emotions=("anger",)))
    t = res.table
    assert t.word_counts == {NOFAKE: 10000, FAKE: 10000}
    assert (t.count("anger", NOFAKE), t.count("anger", FAKE)) == (57, 111)
    from emoframe.report import format_percent
    assert format_percent(t.percentage("anger", NOFAKE)) == "0.57%"
    assert format_percent(t.percentage("anger", FAKE)) == "1.11%"
    assert res.rows[0].symbol is UP


# -- characterization ---------------------------------------------------------

def test_contrast_examples():
    t = published_table("politics")
    assert contrast(t, "anger") == Decimal("-0.54")
    assert contrast(t, "anticipation") == 0
    swapped = QuantificationTable.from_percentages("x", {e: (t.percentage(e, FAKE), t.percentage(e, NOFAKE))
                                                         for e in SEVEN})
    for e in SEVEN:
        assert contrast(swapped, e) == -contrast(t, e)


def test_classify():
    assert classify(-0.54, 0.03) is UP
    assert classify(0.14, 0.03) is DOWN
    for mu in (1e-9, 0.03, 5):
        assert classify(0, mu) is EQ
    assert classify(0.03, 0.03) is EQ
    assert classify(-0.03, 0.03) is EQ
    assert classify(Decimal("0.04"), Decimal("0.04")) is EQ
    for bad in (0, -1, 0.0):
        with pytest.raises(ConfigError):
            classify(1.0, bad)


@pytest.mark.parametrize("domain, symbols", [
    ("politics", [UP, EQ, UP, UP, DOWN, UP, UP]),
    ("celebrities", [UP, DOWN, DOWN, DOWN, DOWN, DOWN, DOWN]),
    # anticipation recomputed from the percentages: 0.45 - 0.49 < -mu
    ("covid-19", [UP, UP, DOWN, UP, UP, UP, UP]),
])
def test_characterize_published_columns(domain, symbols):
    rows = characterize(published_table(domain), Decimal("0.03"))
    assert [r.emotion for r in rows] == list(SEVEN)
    assert [r.symbol for r in rows] == symbols


def test_characterize_config_order():
    cfg = PipelineConfig(mu=0.03, emotions=("joy", "anger"))
    rows = characterize(published_table("politics"), cfg)
    assert [(r.emotion, r.symbol) for r in rows] == [("joy", DOWN), ("anger", UP)]


def test_config_validation():
    for kwargs in ({"tau": -0.1}, {"tau": 1.1}, {"mu": 0}, {"mu": -0.5}, {"emotions": ()}, {"emotions": ("hope",)}):
        with pytest.raises(ConfigError):
            PipelineConfig(**kwargs)


def test_feasible_interval():
    cells = [("a", 0.0, EQ), ("b", Decimal("0.04"), DOWN), ("c", -0.5, UP), ("d", Decimal("-0.04"), DOWN)]
    iv = feasible_mu_interval(cells)
    assert iv.lower == 0 and iv.upper == Decimal("0.04")
    assert iv.binding_upper == ("b",)
    assert iv.infeasible == ("d",)
    assert iv.contains(Decimal("0.039")) and not iv.contains(Decimal("0.04")) and not iv.contains(0)
    iv = feasible_mu_interval([("a", 0.1, EQ), ("b", -0.1, EQ), ("c", 0.3, DOWN)])
    assert iv.lower == 0.1 and iv.binding_lower == ("a", "b")
    assert iv.contains(0.1) and not iv.contains(0.09)
    assert iv.describe() == "[0.1, 0.3)"


# -- full pipeline ------------------------------------------------------------

def hand_corpus():
    return Corpus((
        Publication("f1", "Grim news today is GRIM", FAKE),
        Publication("n1", "calm news and grim facts today https://t.co/z", NOFAKE),
    ))


def test_run_pipeline_hand_computed():
    lex = Lexicon.from_associations([("grim", "fear", 0.7)])
    stops = StopwordList.of({"is", "and"})
    res = run_pipeline(hand_corpus(), lex, stops, PipelineConfig(tau=0.5, mu=0.03, emotions=("fear", "joy")))
    t = res.table
    # fake: grim news today grim -> 4 words, 2 fear markers; nofake: calm news grim facts today -> 5 words, 1
    assert t.word_counts == {FAKE: 4, NOFAKE: 5}
    assert t.count("fear", FAKE) == 2 and t.count("fear", NOFAKE) == 1
    assert t.percentage("fear", FAKE) == 50.0 and t.percentage("fear", NOFAKE) == 20.0
    assert t.raw_word_counts == {FAKE: 5, NOFAKE: 6}
    assert [(r.emotion, r.variation, r.symbol) for r in res.rows] == [("fear", -30.0, UP), ("joy", 0.0, EQ)]
    again = run_pipeline(hand_corpus(), lex, stops, PipelineConfig(tau=0.5, mu=0.03, emotions=("fear", "joy")))
    assert again == res


def test_run_pipeline_empty_corpus(small_lexicon):
    with pytest.raises(EmoframeError):
        run_pipeline(Corpus(()), small_lexicon)


def test_run_pipeline_dedups_and_warns(small_lexicon):
    corpus = Corpus((Publication("1", "grim", FAKE), Publication("2", "GRIM ", FAKE)))
    res = run_pipeline(corpus, small_lexicon)
    assert res.duplicates_removed == 1
    assert res.table.degenerate == {NOFAKE}
    assert res.warnings and "noFake" in res.warnings[0]


def test_intermediate_round_trip(small_lexicon):
    lex = Lexicon.from_associations([("grim", "fear", 0.7)])
    res = run_pipeline(hand_corpus(), lex)
    buf = io.StringIO()
    dump_emotionalized(res.documents, buf)
    first = buf.getvalue().splitlines()[0]
    assert first == ('{"id": "f1", "class": "fake", "tokens": [{"w": "grim"}, {"e": "fear"}, '
                     '{"w": "news"}, {"w": "today"}, {"w": "is"}, {"w": "grim"}, {"e": "fear"}]}')
    docs = load_emotionalized(io.StringIO(buf.getvalue()))
    assert docs == res.documents
    t = quantify(docs, res.table.emotions)
    assert t.percentages == res.table.percentages and t.word_counts == res.table.word_counts


def test_load_emotionalized_errors():
    with pytest.raises(EmoframeError):
        load_emotionalized(io.StringIO('{"id": "1", "class": "maybe", "tokens": []}\n'))
    with pytest.raises(EmoframeError):
        load_emotionalized(io.StringIO('{"id": "1", "class": "fake", "tokens": [{"x": 1}]}\n'))
