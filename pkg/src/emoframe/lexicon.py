"""Loading and indexing of NRC-style word/emotion association lexicons.

The on-disk layout is the one used by the NRC Emotion Lexicon distribution::

    abandon<TAB>fear<TAB>1
    abandon<TAB>joy<TAB>0

Binary association files (values 0/1) and real-valued intensity files share
the same representation: every association carries an intensity in [0, 1].
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, TextIO

from .errors import ConfigError, LexiconParseError

DEFAULT_EMOTIONS = (
    "anger",
    "anticipation",
    "disgust",
    "fear",
    "joy",
    "sadness",
    "surprise",
    "trust",
)

BINARY = "binary-association"
REAL = "real-intensity"


def validate_emotions(emotions: Iterable[str], vocabulary: Iterable[str] = DEFAULT_EMOTIONS) -> tuple[str, ...]:
    """Check an ordered emotion selection against ``vocabulary``.

    Labels are lowercased; duplicates, unknown labels and an empty selection
    raise :class:`ConfigError`.
    """
    vocab = set(vocabulary)
    out: list[str] = []
    for raw in emotions:
        label = raw.strip().lower()
        if not label:
            continue
        if label not in vocab:
            raise ConfigError(f"unknown emotion {raw!r}; expected one of {', '.join(sorted(vocab))}")
        if label in out:
            raise ConfigError(f"emotion {label!r} listed twice")
        out.append(label)
    if not out:
        raise ConfigError("emotion selection is empty")
    return tuple(out)


@dataclass(frozen=True)
class Lexicon:
    """Immutable word -> ((emotion, intensity), ...) index.

    Associations for each word are stored sorted by emotion label, so
    :meth:`lookup` is a single dict access.
    """

    entries: Mapping[str, tuple[tuple[str, float], ...]]
    vocabulary: tuple[str, ...] = DEFAULT_EMOTIONS
    skipped_out_of_vocabulary: int = 0
    skipped_by_emotion: Mapping[str, int] = field(default_factory=dict)

    @classmethod
    def from_associations(cls, associations: Iterable[tuple[str, str, float]],
                          vocabulary: Iterable[str] = DEFAULT_EMOTIONS) -> "Lexicon":
        """Build a lexicon from ``(word, emotion, intensity)`` triples.

        Duplicate ``(word, emotion)`` pairs raise ``LexiconParseError``.
        """
        vocab = tuple(vocabulary)
        staged: dict[str, dict[str, float]] = {}
        for word, emotion, intensity in associations:
            _check_entry(word, emotion, intensity, vocab)
            slot = staged.setdefault(word, {})
            if emotion in slot:
                raise LexiconParseError(f"duplicate entry for ({word!r}, {emotion!r})")
            slot[emotion] = float(intensity)
        return cls._freeze(staged, vocab, {})

    @classmethod
    def _freeze(cls, staged, vocab, skipped) -> "Lexicon":
        entries = {w: tuple(sorted(assoc.items())) for w, assoc in staged.items()}
        return cls(
            entries=MappingProxyType(entries),
            vocabulary=tuple(vocab),
            skipped_out_of_vocabulary=sum(skipped.values()),
            skipped_by_emotion=MappingProxyType(dict(skipped)),
        )

    def lookup(self, word: str) -> tuple[tuple[str, float], ...]:
        return self.entries.get(word, ())

    @property
    def source_kind(self) -> str:
        for assoc in self.entries.values():
            for _, intensity in assoc:
                if intensity not in (0.0, 1.0):
                    return REAL
        return BINARY

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, word: object) -> bool:
        return word in self.entries

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Lexicon):
            return NotImplemented
        return dict(self.entries) == dict(other.entries) and self.vocabulary == other.vocabulary

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.entries.items())))

    def n_associations(self) -> int:
        return sum(len(a) for a in self.entries.values())

    def emotion_counts(self, tau: float = 0.0) -> dict[str, int]:
        """Number of words associated with each emotion at intensity >= ``tau``."""
        counts = {e: 0 for e in self.vocabulary}
        for assoc in self.entries.values():
            for emotion, intensity in assoc:
                if intensity >= tau:
                    counts[emotion] += 1
        return counts


def _check_entry(word: str, emotion: str, intensity: float, vocab: tuple[str, ...], line: int | None = None) -> None:
    if not word:
        raise LexiconParseError("empty word", line)
    if any(ch.isspace() for ch in word):
        raise LexiconParseError(f"multi-word entry {word!r} is not supported", line)
    if word != word.lower():
        raise LexiconParseError(f"word {word!r} is not lowercase", line)
    if emotion not in vocab:
        raise LexiconParseError(f"emotion {emotion!r} not in vocabulary", line)
    if not 0.0 <= intensity <= 1.0:
        raise LexiconParseError(f"intensity {intensity!r} outside [0, 1]", line)


def parse_lexicon(stream: TextIO | str, vocabulary: Iterable[str] = DEFAULT_EMOTIONS,
                  has_header: bool = False) -> Lexicon:
    """Parse a tab-separated ``word, emotion, value`` lexicon.

    Rows naming an emotion outside ``vocabulary`` (e.g. the NRC
    ``positive``/``negative`` sentiment rows) are skipped and counted on the
    returned lexicon. Blank lines are ignored. Any malformed row raises
    :class:`LexiconParseError` carrying the 1-based line number.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    vocab = tuple(vocabulary)
    vocab_set = set(vocab)
    staged: dict[str, dict[str, float]] = {}
    skipped: dict[str, int] = {}

    for lineno, raw in enumerate(stream, start=1):
        if has_header and lineno == 1:
            continue
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise LexiconParseError(f"expected 3 tab-separated fields, got {len(parts)}", lineno)
        word, emotion, value = (p.strip() for p in parts)
        emotion = emotion.lower()
        try:
            intensity = float(value)
        except ValueError:
            raise LexiconParseError(f"non-numeric value {value!r}", lineno) from None
        if intensity != intensity or not 0.0 <= intensity <= 1.0:
            raise LexiconParseError(f"value {value!r} outside [0, 1]", lineno)
        if not word:
            raise LexiconParseError("empty word", lineno)
        if any(ch.isspace() for ch in word):
            raise LexiconParseError(f"multi-word entry {word!r} is not supported", lineno)
        if emotion not in vocab_set:
            skipped[emotion] = skipped.get(emotion, 0) + 1
            continue
        word = word.lower()
        slot = staged.setdefault(word, {})
        if emotion in slot:
            raise LexiconParseError(f"duplicate entry for ({word!r}, {emotion!r})", lineno)
        slot[emotion] = intensity

    return Lexicon._freeze(staged, vocab, skipped)


def load_lexicon(path, vocabulary: Iterable[str] = DEFAULT_EMOTIONS, has_header: bool = False) -> Lexicon:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_lexicon(fh, vocabulary, has_header=has_header)


def serialize_lexicon(lexicon: Lexicon) -> str:
    """Write ``lexicon`` back out in the three-column layout (sorted by word)."""
    lines = []
    for word in sorted(lexicon.entries):
        for emotion, intensity in lexicon.entries[word]:
            value = str(int(intensity)) if intensity in (0.0, 1.0) else repr(intensity)
            lines.append(f"{word}\t{emotion}\t{value}\n")
    return "".join(lines)


def lookup(lexicon: Lexicon, word: str) -> list[tuple[str, float]]:
    """Associations of ``word`` in ascending emotion order; empty when absent."""
    return list(lexicon.lookup(word))
