import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from emoframe.corpus import Corpus, Publication, PublicationClass  # noqa: E402
from emoframe.lexicon import DEFAULT_EMOTIONS, Lexicon  # noqa: E402

DATA = Path(__file__).parent / "data"

VOCAB = ["grim", "hope", "lie", "shock", "truth", "news", "fraud", "calm", "joyful", "dread",
         "panic", "party", "vote", "star", "virus", "cure", "mask", "ban", "win", "loss",
         "tears", "smile", "rage", "trust", "wait", "gross", "wow", "fear", "sad", "ok"]
FILLER = ["the", "a", "and", "today", "people", "said", "2020", "it's", "#breaking", "@user"]


@pytest.fixture
def data_dir():
    return DATA


def random_lexicon_triples(rng, n_words=30, binary=False):
    words = rng.sample(VOCAB, min(n_words, len(VOCAB)))
    triples = []
    for w in words:
        for e in rng.sample(DEFAULT_EMOTIONS, rng.randint(0, 4)):
            value = float(rng.randint(0, 1)) if binary else rng.choice([0.0, 0.25, 0.5, 0.6, 0.8, 1.0, rng.random()])
            triples.append((w, e, value))
    return triples


def random_rows(rng, n_docs):
    rows = []
    for _ in range(n_docs):
        n = rng.randint(0, 12)
        words = [rng.choice(VOCAB + FILLER) for _ in range(n)]
        words = [w.upper() if rng.random() < 0.1 else w for w in words]
        if rng.random() < 0.2:
            words.insert(rng.randint(0, len(words)), "https://t.co/" + rng.choice("abc"))
        rows.append((" ".join(words) or "x", rng.choice(["fake", "nofake"])))
    if rows and rng.random() < 0.5:
        rows.append(rows[rng.randrange(len(rows))])
    return rows


def rows_to_corpus(rows, domain="synthetic"):
    pubs = tuple(Publication(str(i), text, PublicationClass(label), domain) for i, (text, label) in enumerate(rows))
    return Corpus(pubs, domain)


@pytest.fixture
def rng():
    return random.Random(20261016)


@pytest.fixture
def small_lexicon():
    return Lexicon.from_associations([("grim", "fear", 0.8), ("grim", "sadness", 0.4),
                                      ("hope", "anticipation", 0.6), ("hope", "joy", 0.6)])
