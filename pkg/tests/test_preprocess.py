import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emoframe.corpus import Publication, PublicationClass
from emoframe.preprocess import (
    StopwordList,
    load_stopwords,
    normalize,
    preprocess,
    preprocess_text,
    remove_stopwords,
    strip_urls,
    tokenize,
)

from oracle import oracle_normalize, oracle_tokens


def pub(text):
    return Publication("p", text, PublicationClass.FAKE)


def test_strip_urls():
    assert strip_urls("see https://x.co/ab now") == "see   now"
    assert strip_urls("no links here") == "no links here"
    assert strip_urls("a www.site.org b http://x") == "a   b  "
    assert strip_urls("HTTP://LOUD.COM x") == "  x"


def test_normalize():
    assert normalize("Hello  WORLD") == "hello world"
    assert normalize("") == ""
    assert normalize("  Tab\tand\nnewline https://t.co/x ") == "tab and newline"


def test_tokenize():
    assert tokenize("don't panic!") == ["don't", "panic"]
    assert tokenize("#covid19 @who") == ["covid19", "who"]
    assert tokenize("a_b-c.d") == ["a", "b", "c", "d"]
    assert tokenize("") == []


def test_remove_stopwords():
    assert remove_stopwords(["the", "grim", "truth"], StopwordList.of({"the"})) == ["grim", "truth"]
    assert remove_stopwords(["x", "y"], StopwordList.of(())) == ["x", "y"]


def test_preprocess_composition():
    doc = preprocess(pub("The GRIM truth https://t.co/x"), StopwordList.of({"the"}))
    assert doc.words == ("grim", "truth")
    assert doc.n_tokens_before_stopwords == 3
    assert preprocess(pub("the https://a.b www.c.d"), StopwordList.of({"the"})).words == ()


def test_no_stemming_or_lemmatization():
    assert preprocess_text("Running dogs were RUNNING") == ["running", "dogs", "were", "running"]


def test_drop_numeric():
    assert preprocess_text("covid19 2020 it's 1'000", drop_numeric=True) == ["covid19", "it's"]
    assert preprocess_text("covid19 2020") == ["covid19", "2020"]


def test_stopword_file(tmp_path):
    path = tmp_path / "stops.txt"
    path.write_text("# comment\nThe\n\n  of \n", encoding="utf-8")
    assert load_stopwords(path).words == {"the", "of"}


def test_stopword_list_validates():
    with pytest.raises(ValueError):
        StopwordList.of({"two words"})
    with pytest.raises(ValueError):
        StopwordList.of({""})


def test_golden_file(data_dir):
    from emoframe.corpus import ingest

    stops = load_stopwords(data_dir / "golden_stopwords.txt")
    with open(data_dir / "golden_texts.jsonl", encoding="utf-8") as fh:
        corpus = ingest(fh, "jsonl")
    assert len(corpus) == 20
    out = "".join(f"{p.id}\t{' '.join(preprocess(p, stops).words)}\n" for p in corpus)
    assert out.encode("utf-8") == (data_dir / "golden_tokens.txt").read_bytes()


# -- properties ---------------------------------------------------------------

url = st.builds(lambda scheme, rest: scheme + rest,
                st.sampled_from(["http://", "https://", "www.", "HTTPS://", "Www."]),
                st.text(alphabet="abc./?=:", max_size=8))
chunks = st.lists(st.one_of(st.text(max_size=8), url, st.sampled_from([" ", "\t", "\n", "h", "ttp://"])),
                  max_size=12)
texts = chunks.map("".join)


@settings(max_examples=300)
@given(texts)
def test_strip_urls_leaves_no_scheme(text):
    out = strip_urls(text).lower()
    assert "http://" not in out
    assert "https://" not in out
    assert "www." not in out


@settings(max_examples=300)
@given(texts)
def test_normalize_idempotent(text):
    once = normalize(text)
    assert normalize(once) == once
    assert once == once.strip()
    assert "  " not in once


@settings(max_examples=300)
@given(st.text())
def test_normalize_idempotent_any_text(text):
    once = normalize(text)
    assert normalize(once) == once


@settings(max_examples=300)
@given(st.text())
def test_tokens_have_no_separators_and_are_substrings(text):
    norm = normalize(text)
    for tok in tokenize(norm):
        assert tok
        assert tok in norm
        assert all(ch.isalpha() or ch.isdecimal() or ch == "'" for ch in tok)


@settings(max_examples=300)
@given(st.lists(st.sampled_from(["the", "a", "grim", "news", "of", "x"]), max_size=30),
       st.sets(st.sampled_from(["the", "a", "of", "x"])))
def test_stopword_removal_counts(words, stops):
    out = remove_stopwords(words, StopwordList.of(stops))
    assert len(out) == len(words) - sum(1 for w in words if w in stops)
    assert all(w not in stops for w in out)
    assert out == [w for w in words if w not in stops]


@settings(max_examples=300)
@given(texts, st.sets(st.sampled_from(["the", "a", "of", "x", "h"])))
def test_preprocess_text_level_idempotent(text, stops):
    sl = StopwordList.of(stops)
    words = preprocess_text(text, sl)
    assert preprocess_text(" ".join(words), sl) == words


@settings(max_examples=300)
@given(texts, st.sets(st.sampled_from(["the", "a", "of", "x", "h"])))
def test_matches_oracle_tokenizer(text, stops):
    assert normalize(text) == oracle_normalize(text)
    assert preprocess_text(text, StopwordList.of(stops)) == oracle_tokens(text, stops)
