"""Lexicon-based emotion characterization of Fake vs. noFake publication corpora."""

from .corpus import Corpus, FieldMap, Publication, PublicationClass, dedup_corpus, ingest, ingest_domains
from .errors import ConfigError, EmoframeError, IngestError, LexiconParseError
from .lexicon import DEFAULT_EMOTIONS, Lexicon, load_lexicon, lookup, parse_lexicon, serialize_lexicon
from .pipeline import (
    CharacterizationRow,
    EmotionalizedDocument,
    EmotionMarker,
    PipelineConfig,
    QuantificationTable,
    Symbol,
    Word,
    characterize,
    classify,
    contrast,
    emotionalize_corpus,
    emotionalize_word,
    feasible_mu_interval,
    quantify,
    run_pipeline,
)
from .preprocess import StopwordList, normalize, preprocess, remove_stopwords, strip_urls, tokenize

__version__ = "0.1.0"
