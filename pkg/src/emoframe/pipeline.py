"""Emotionalization, quantification and characterization.

The three layers run in sequence over a labeled corpus:

1. every preprocessed word is looked up in the lexicon and, for each emotion
   whose intensity reaches ``tau``, an emotion marker is inserted right after
   the word;
2. markers are counted per class and expressed as a percentage of the class
   word count;
3. the per-emotion difference ``P(noFake) - P(Fake)`` is mapped to a symbol
   using the margin ``mu``.
"""

from __future__ import annotations

import enum
import json
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from decimal import Decimal
from numbers import Real
from typing import Iterable, Mapping, Sequence, TextIO, Union

from .corpus import Corpus, PublicationClass, dedup_corpus
from .errors import ConfigError, EmoframeError
from .lexicon import DEFAULT_EMOTIONS, Lexicon, validate_emotions
from .preprocess import EMPTY_STOPWORDS, StopwordList, TokenizedDocument, normalize, preprocess

FAKE = PublicationClass.FAKE
NOFAKE = PublicationClass.NOFAKE

Number = Union[float, Decimal]

DEFAULT_TAU = 0.5
DEFAULT_MU = 0.03


# -- tokens -----------------------------------------------------------------

@dataclass(frozen=True)
class Word:
    text: str


@dataclass(frozen=True)
class EmotionMarker:
    emotion: str


Token = Union[Word, EmotionMarker]


@dataclass(frozen=True)
class EmotionalizedDocument:
    publication_id: str
    label: PublicationClass
    tokens: tuple[Token, ...]

    def words(self) -> list[str]:
        return [t.text for t in self.tokens if isinstance(t, Word)]

    def markers(self) -> list[str]:
        return [t.emotion for t in self.tokens if isinstance(t, EmotionMarker)]


@dataclass(frozen=True)
class PipelineConfig:
    tau: float = DEFAULT_TAU
    mu: Number = DEFAULT_MU
    emotions: tuple[str, ...] = DEFAULT_EMOTIONS

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ConfigError(f"tau must lie in [0, 1], got {self.tau}")
        _check_mu(self.mu)
        object.__setattr__(self, "emotions", validate_emotions(self.emotions))


def _check_mu(mu) -> None:
    if not isinstance(mu, (Real, Decimal)) or not mu > 0:
        raise ConfigError(f"mu must be > 0, got {mu}")


# -- layer 1 ----------------------------------------------------------------

def emotionalize_word(word: str, lexicon: Lexicon, tau: float) -> list[Token]:
    """``[Word(word)]`` followed by one marker per association with intensity >= tau."""
    out: list[Token] = [Word(word)]
    for emotion, intensity in lexicon.lookup(word):
        if intensity >= tau:
            out.append(EmotionMarker(emotion))
    return out


def emotionalize_document(doc: TokenizedDocument, label: PublicationClass, lexicon: Lexicon,
                          tau: float) -> EmotionalizedDocument:
    tokens: list[Token] = []
    for word in doc.words:
        tokens.extend(emotionalize_word(word, lexicon, tau))
    return EmotionalizedDocument(doc.publication_id, label, tuple(tokens))


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        return os.cpu_count() or 1
    if threads < 1:
        raise ConfigError(f"thread count must be >= 1, got {threads}")
    return threads


def _chunks(items: Sequence, n: int) -> list[Sequence]:
    size = max(1, -(-len(items) // n))
    return [items[i:i + size] for i in range(0, len(items), size)]


def emotionalize_corpus(docs: Sequence[tuple[TokenizedDocument, PublicationClass]], lexicon: Lexicon,
                        tau: float, threads: int | None = 1) -> list[EmotionalizedDocument]:
    """Emotionalize ``(document, class)`` pairs, preserving order."""
    threads = _resolve_threads(threads)
    docs = list(docs)
    if threads == 1 or len(docs) < 2:
        return [emotionalize_document(d, c, lexicon, tau) for d, c in docs]

    def work(chunk):
        return [emotionalize_document(d, c, lexicon, tau) for d, c in chunk]

    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(work, _chunks(docs, threads)))
    return [doc for part in parts for doc in part]


# -- layer 2 ----------------------------------------------------------------

@dataclass(frozen=True)
class QuantificationTable:
    """Per-class emotion counts ``E``, word counts ``W`` and percentages ``P``.

    Tables built from published percentages (:meth:`from_percentages`) carry
    no counts; ``emotion_counts``/``word_counts`` are then empty.
    """

    domain: str
    emotions: tuple[str, ...]
    percentages: Mapping[tuple[str, PublicationClass], Number]
    emotion_counts: Mapping[tuple[str, PublicationClass], int] = field(default_factory=dict)
    word_counts: Mapping[PublicationClass, int] = field(default_factory=dict)
    degenerate: frozenset[PublicationClass] = frozenset()
    # word counts before stopword removal, when known
    raw_word_counts: Mapping[PublicationClass, int] | None = None

    @classmethod
    def from_percentages(cls, domain: str, values: Mapping[str, tuple[Number, Number]]) -> "QuantificationTable":
        """``values`` maps emotion -> ``(P_noFake, P_Fake)``."""
        pct = {}
        for emotion, (nofake, fake) in values.items():
            pct[(emotion, NOFAKE)] = nofake
            pct[(emotion, FAKE)] = fake
        return cls(domain, tuple(values), pct)

    def percentage(self, emotion: str, label: PublicationClass) -> Number:
        return self.percentages[(emotion, label)]

    def count(self, emotion: str, label: PublicationClass) -> int:
        return self.emotion_counts[(emotion, label)]

    @property
    def has_counts(self) -> bool:
        return bool(self.word_counts)

    def raw_percentage(self, emotion: str, label: PublicationClass) -> float | None:
        """Percentage against the pre-stopword word count, if that count is known."""
        if not self.raw_word_counts or not self.has_counts:
            return None
        w = self.raw_word_counts[label]
        return self.emotion_counts[(emotion, label)] * 100 / w if w else 0.0


def percentage(count: int, words: int) -> float:
    return count * 100 / words if words else 0.0


def count_document(doc: EmotionalizedDocument) -> tuple[Counter, int]:
    markers = Counter()
    words = 0
    for tok in doc.tokens:
        if isinstance(tok, Word):
            words += 1
        else:
            markers[tok.emotion] += 1
    return markers, words


def quantify(docs: Iterable[EmotionalizedDocument], emotions: Sequence[str] = DEFAULT_EMOTIONS,
             domain: str = "", threads: int | None = 1,
             raw_word_counts: Mapping[PublicationClass, int] | None = None) -> QuantificationTable:
    """Count markers and words per class and compute percentages."""
    threads = _resolve_threads(threads)
    docs = list(docs)

    def work(chunk):
        e = {c: Counter() for c in PublicationClass}
        w = Counter()
        for doc in chunk:
            markers, words = count_document(doc)
            e[doc.label].update(markers)
            w[doc.label] += words
        return e, w

    if threads == 1 or len(docs) < 2:
        partials = [work(docs)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            partials = list(pool.map(work, _chunks(docs, threads)))

    # integer merges: order of partials cannot affect the result
    e_total = {c: Counter() for c in PublicationClass}
    w_total = Counter()
    for e, w in partials:
        for c in PublicationClass:
            e_total[c].update(e[c])
        w_total.update(w)

    emotions = tuple(emotions)
    counts = {}
    pct = {}
    words = {c: w_total[c] for c in PublicationClass}
    for emotion in emotions:
        for c in PublicationClass:
            counts[(emotion, c)] = e_total[c][emotion]
            pct[(emotion, c)] = percentage(counts[(emotion, c)], words[c])
    degenerate = frozenset(c for c in PublicationClass if words[c] == 0)
    return QuantificationTable(domain, emotions, pct, counts, words, degenerate,
                               dict(raw_word_counts) if raw_word_counts is not None else None)


# -- layer 3 ----------------------------------------------------------------

class Symbol(enum.Enum):
    MORE_IN_FAKE = "↑"
    LESS_IN_FAKE = "↓"
    EQUAL = "="

    @property
    def ascii(self) -> str:
        return _ASCII[self]

    @property
    def swapped(self) -> "Symbol":
        if self is Symbol.MORE_IN_FAKE:
            return Symbol.LESS_IN_FAKE
        if self is Symbol.LESS_IN_FAKE:
            return Symbol.MORE_IN_FAKE
        return self

    @classmethod
    def parse(cls, text: str) -> "Symbol":
        key = text.strip().lower()
        for sym in cls:
            if key in (sym.value, sym.ascii, sym.name.lower()):
                return sym
        raise ValueError(f"not a characterization symbol: {text!r}")


_ASCII = {Symbol.MORE_IN_FAKE: "up", Symbol.LESS_IN_FAKE: "down", Symbol.EQUAL: "eq"}


@dataclass(frozen=True)
class CharacterizationRow:
    emotion: str
    variation: Number
    symbol: Symbol


def contrast(table: QuantificationTable, emotion: str) -> Number:
    return table.percentage(emotion, NOFAKE) - table.percentage(emotion, FAKE)


def classify(v: Number, mu: Number) -> Symbol:
    _check_mu(mu)
    if v > mu:
        return Symbol.LESS_IN_FAKE
    if v < -mu:
        return Symbol.MORE_IN_FAKE
    return Symbol.EQUAL


def characterize(table: QuantificationTable, config: PipelineConfig | Number = DEFAULT_MU,
                 emotions: Sequence[str] | None = None) -> list[CharacterizationRow]:
    """One row per emotion, in configured order (or the table's order)."""
    if isinstance(config, PipelineConfig):
        mu = config.mu
        emotions = emotions or config.emotions
    else:
        mu = config
    _check_mu(mu)
    if emotions is None:
        emotions = table.emotions
    rows = []
    for emotion in emotions:
        v = contrast(table, emotion)
        rows.append(CharacterizationRow(emotion, v, classify(v, mu)))
    return rows


@dataclass(frozen=True)
class MuInterval:
    """Range of margins under which a set of target symbols is reproduced.

    A margin ``mu`` works iff ``lower <= mu < upper`` and ``mu > 0``. Cells
    that no margin can reproduce (wrong sign, or a nonzero target at V = 0)
    are listed in ``infeasible`` and excluded from the bounds.
    """

    lower: Number
    upper: Number | None
    binding_lower: tuple = ()
    binding_upper: tuple = ()
    infeasible: tuple = ()

    def contains(self, mu: Number) -> bool:
        if not mu > 0 or mu < self.lower:
            return False
        return self.upper is None or mu < self.upper

    @property
    def empty(self) -> bool:
        return self.upper is not None and self.upper <= self.lower

    def describe(self, decimals: int = 4) -> str:
        lo = "(0" if self.lower == 0 else f"[{_fmt(self.lower, decimals)}"
        hi = "inf)" if self.upper is None else f"{_fmt(self.upper, decimals)})"
        return f"{lo}, {hi}"


def _fmt(x: Number, decimals: int) -> str:
    s = f"{Decimal(str(x)):.{decimals}f}".rstrip("0")
    return s + "0" if s.endswith(".") else s


def feasible_mu_interval(cells: Iterable[tuple[object, Number, Symbol]]) -> MuInterval:
    """Margins that map every ``(key, V, target)`` cell to its target symbol.

    ``=`` needs ``|V| <= mu``; an arrow needs ``|V| > mu`` with the matching
    sign of ``V``.
    """
    lower: Number = 0
    upper: Number | None = None
    lo_keys: list = []
    hi_keys: list = []
    bad: list = []
    for key, v, target in cells:
        if target is Symbol.EQUAL:
            a = abs(v)
            if a > lower:
                lower, lo_keys = a, [key]
            elif a == lower and a > 0:
                lo_keys.append(key)
            continue
        right_sign = v > 0 if target is Symbol.LESS_IN_FAKE else v < 0
        if not right_sign:
            bad.append(key)
            continue
        a = abs(v)
        if upper is None or a < upper:
            upper, hi_keys = a, [key]
        elif a == upper:
            hi_keys.append(key)
    return MuInterval(lower, upper, tuple(lo_keys), tuple(hi_keys), tuple(bad))


def stability_interval(rows: Sequence[CharacterizationRow]) -> MuInterval:
    """Margins that leave every symbol in ``rows`` unchanged."""
    return feasible_mu_interval((r.emotion, r.variation, r.symbol) for r in rows)


# -- orchestration ----------------------------------------------------------

@dataclass(frozen=True)
class PipelineResult:
    table: QuantificationTable
    rows: list[CharacterizationRow]
    documents: list[EmotionalizedDocument]
    duplicates_removed: int = 0

    @property
    def warnings(self) -> list[str]:
        return [f"class {c.display} has no words; its percentages are reported as 0"
                for c in sorted(self.table.degenerate, key=lambda c: c.value)]


def run_pipeline(corpus: Corpus, lexicon: Lexicon, stops: StopwordList = EMPTY_STOPWORDS,
                 config: PipelineConfig = PipelineConfig(), threads: int | None = 1,
                 drop_numeric: bool = False) -> PipelineResult:
    """dedup -> preprocess -> emotionalize -> quantify -> characterize."""
    if not len(corpus):
        raise EmoframeError(f"corpus {corpus.domain!r} is empty")
    deduped = dedup_corpus(corpus, normalize)
    pubs = deduped.corpus.publications
    tokenized = [(preprocess(p, stops, drop_numeric), p.label) for p in pubs]
    raw_words = Counter()
    for doc, label in tokenized:
        raw_words[label] += doc.n_tokens_before_stopwords or 0
    docs = emotionalize_corpus(tokenized, lexicon, config.tau, threads)
    table = quantify(docs, config.emotions, corpus.domain, threads,
                     raw_word_counts={c: raw_words[c] for c in PublicationClass})
    rows = characterize(table, config)
    return PipelineResult(table, rows, docs, deduped.removed)


# -- intermediate corpus ----------------------------------------------------

def dump_emotionalized(docs: Iterable[EmotionalizedDocument], fh: TextIO) -> None:
    """One JSON object per document: ``{"id", "class", "tokens": [{"w": ..}, {"e": ..}]}``."""
    for doc in docs:
        tokens = [{"w": t.text} if isinstance(t, Word) else {"e": t.emotion} for t in doc.tokens]
        rec = {"id": doc.publication_id, "class": doc.label.value, "tokens": tokens}
        fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def load_emotionalized(fh: TextIO) -> list[EmotionalizedDocument]:
    docs = []
    for n, line in enumerate(fh, start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
            tokens: list[Token] = []
            for tok in rec["tokens"]:
                if "w" in tok:
                    tokens.append(Word(tok["w"]))
                elif "e" in tok:
                    tokens.append(EmotionMarker(tok["e"]))
                else:
                    raise ValueError(f"token {tok!r} has neither 'w' nor 'e'")
            docs.append(EmotionalizedDocument(str(rec["id"]), PublicationClass.parse(rec["class"]), tuple(tokens)))
        except (KeyError, TypeError, ValueError) as exc:
            raise EmoframeError(f"line {n}: bad emotionalized record ({exc})") from None
    return docs
