"""Text normalization, tokenization and stopword removal.

Only the preparation steps the method calls for are applied: URL removal,
lowercasing, stopword removal (plus whitespace cleanup and word splitting).
No stemming or lemmatization happens anywhere in this package.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass
from typing import Iterable, TextIO

URL_RE = re.compile(r"(?:https?://|www\.)\S*", re.IGNORECASE)
_WS_RE = re.compile(r"\s+")


@dataclass(frozen=True)
class StopwordList:
    words: frozenset[str]

    def __post_init__(self):
        for w in self.words:
            if not w or w != w.lower() or any(ch.isspace() for ch in w):
                raise ValueError(f"invalid stopword {w!r}")

    @classmethod
    def of(cls, words: Iterable[str]) -> "StopwordList":
        return cls(frozenset(words))

    def __contains__(self, word: object) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)


EMPTY_STOPWORDS = StopwordList(frozenset())


def parse_stopwords(stream: TextIO | str) -> StopwordList:
    """One token per line; blank lines and ``#`` comments are ignored. Entries are lowercased."""
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    words = set()
    for line in stream:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        words.add(line.lower())
    return StopwordList(frozenset(words))


def load_stopwords(path) -> StopwordList:
    with open(path, encoding="utf-8") as fh:
        return parse_stopwords(fh)


@dataclass(frozen=True)
class TokenizedDocument:
    publication_id: str
    words: tuple[str, ...]
    # token count before stopword removal, kept for denominator sensitivity checks
    n_tokens_before_stopwords: int | None = None


def strip_urls(text: str) -> str:
    """Replace every ``http://``, ``https://`` or ``www.`` run (up to whitespace) with one space."""
    # A removal can splice two fragments into a new URL prefix ("hthttp://tp://"),
    # so repeat until stable.
    while True:
        out = URL_RE.sub(" ", text)
        if out == text:
            return out
        text = out


def normalize(text: str) -> str:
    text = strip_urls(text)
    text = text.lower()
    # lowercasing can itself create a URL prefix (e.g. Kelvin sign), so strip again
    text = strip_urls(text)
    return _WS_RE.sub(" ", text).strip()


def _is_word_char(ch: str) -> bool:
    return ch.isalpha() or ch.isdecimal() or ch == "'"


def tokenize(text: str) -> list[str]:
    """Split on every character that is not a letter, decimal digit or ASCII apostrophe."""
    tokens = []
    start = None
    for i, ch in enumerate(text):
        if _is_word_char(ch):
            if start is None:
                start = i
        elif start is not None:
            tokens.append(text[start:i])
            start = None
    if start is not None:
        tokens.append(text[start:])
    return tokens


def remove_stopwords(words: Iterable[str], stops: StopwordList) -> list[str]:
    return [w for w in words if w not in stops.words]


def is_numeric(token: str) -> bool:
    return any(ch.isdecimal() for ch in token) and all(ch.isdecimal() or ch == "'" for ch in token)


def preprocess_text(text: str, stops: StopwordList = EMPTY_STOPWORDS, drop_numeric: bool = False) -> list[str]:
    tokens = tokenize(normalize(text))
    if drop_numeric:
        tokens = [t for t in tokens if not is_numeric(t)]
    return remove_stopwords(tokens, stops)


def preprocess(publication, stops: StopwordList = EMPTY_STOPWORDS, drop_numeric: bool = False) -> TokenizedDocument:
    """normalize -> tokenize -> remove_stopwords for one publication."""
    tokens = tokenize(normalize(publication.text))
    if drop_numeric:
        tokens = [t for t in tokens if not is_numeric(t)]
    words = remove_stopwords(tokens, stops)
    return TokenizedDocument(publication.id, tuple(words), len(tokens))
