"""Command-line entry point.

Subcommands::

    emoframe run                 full pipeline over one or more labeled corpora
    emoframe characterize FILE   contrast + symbols from a table of percentages
    emoframe quantify FILE       percentages from an emotionalized JSONL corpus
    emoframe emotionalize        write the emotionalized corpus as JSONL
    emoframe validate-lexicon F  parse a lexicon and print a summary

Options may also come from a JSON manifest (``--config``, or the file named
by ``$EMOFRAME_CONFIG``); command-line flags take precedence.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from importlib import resources
from pathlib import Path
from typing import Sequence

from . import __version__
from .corpus import Corpus, FieldMap, load_corpus, parse_label_map, dedup_corpus
from .errors import ConfigError, EmoframeError
from .lexicon import DEFAULT_EMOTIONS, Lexicon, load_lexicon, validate_emotions
from .pipeline import (
    DEFAULT_MU,
    DEFAULT_TAU,
    PipelineConfig,
    characterize,
    dump_emotionalized,
    emotionalize_corpus,
    load_emotionalized,
    quantify,
    run_pipeline,
)
from .preprocess import EMPTY_STOPWORDS, load_stopwords, normalize, preprocess
from .report import (
    expected_interval,
    find_discrepancies,
    read_expected_symbols,
    read_quantification,
    render_characterization,
    render_discrepancies,
    render_quantification,
    render_quantifications,
)

log = logging.getLogger("emoframe")

CONFIG_ENV = "EMOFRAME_CONFIG"
EXTENSIONS = {"text": "txt", "markdown": "md", "csv": "csv", "json": "json"}

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2


class UsageError(EmoframeError):
    pass


# -- manifest ----------------------------------------------------------------

@dataclass
class CorpusSpec:
    path: str
    domain: str = ""
    format: str | None = None


@dataclass
class RunManifest:
    lexicon: str | None = None
    lexicon_has_header: bool = False
    corpora: list[CorpusSpec] = field(default_factory=list)
    stopwords: str | None = None
    tau: float = DEFAULT_TAU
    mu: Decimal = Decimal(str(DEFAULT_MU))
    emotions: tuple[str, ...] = DEFAULT_EMOTIONS
    format: str = "text"
    decimals: int = 2
    ascii: bool = False
    id_field: str = "id"
    text_field: str = "text"
    label_field: str = "label"
    domain_field: str | None = None
    label_map: str | dict | None = None
    drop_numeric: bool = False
    threads: int | None = None
    out: str | None = None
    emit_intermediate: bool = False
    emotions_explicit: bool = False

    @property
    def field_map(self) -> FieldMap:
        return FieldMap(self.id_field, self.text_field, self.label_field, self.domain_field)

    def config(self) -> PipelineConfig:
        return PipelineConfig(tau=self.tau, mu=self.mu, emotions=self.emotions)


def parse_corpus_arg(value: str) -> CorpusSpec:
    """``PATH`` or ``DOMAIN=PATH``."""
    if "=" in value and not Path(value).exists():
        domain, path = value.split("=", 1)
        return CorpusSpec(path, domain)
    return CorpusSpec(value)


def _parse_mu(value) -> Decimal:
    try:
        mu = Decimal(str(value))
    except InvalidOperation:
        raise ConfigError(f"--mu: not a number: {value!r}") from None
    if not mu.is_finite() or mu <= 0:
        raise ConfigError(f"--mu must be > 0, got {value}")
    return mu


def _parse_emotions(value) -> tuple[str, ...]:
    items = value.split(",") if isinstance(value, str) else list(value)
    return validate_emotions(items)


def load_manifest(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path}: invalid JSON ({exc.msg})") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config file {path}: expected a JSON object")
    base = Path(path).parent
    # relative paths in a manifest are relative to the manifest itself
    for key in ("lexicon", "stopwords"):
        if isinstance(data.get(key), str):
            data[key] = str(base / data[key])
    corpora = []
    for item in data.get("corpora", []):
        if isinstance(item, str):
            item = {"path": item}
        if not isinstance(item, dict) or "path" not in item:
            raise ConfigError(f"config file {path}: each corpus needs a 'path'")
        corpora.append(CorpusSpec(str(base / item["path"]), item.get("domain", ""), item.get("format")))
    data["corpora"] = corpora
    return data


_MANIFEST_KEYS = set(RunManifest.__dataclass_fields__) - {"emotions_explicit"}


def build_manifest(args: argparse.Namespace) -> RunManifest:
    config_path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    data = load_manifest(config_path)
    unknown = set(data) - _MANIFEST_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    # flags win over the manifest
    for key in _MANIFEST_KEYS:
        value = getattr(args, key, None)
        if value is None or value is False or value == []:
            continue
        data[key] = value
    if getattr(args, "demo", False):
        for key, value in _demo_manifest().items():
            if not data.get(key):
                data[key] = value
    explicit = "emotions" in data
    m = RunManifest(**data)
    m.emotions_explicit = explicit
    m.mu = _parse_mu(m.mu)
    m.emotions = _parse_emotions(m.emotions)
    m.tau = float(m.tau)
    if m.format not in EXTENSIONS:
        raise ConfigError(f"unknown format {m.format!r}")
    return m


def _demo_manifest() -> dict:
    root = resources.files("emoframe") / "data"
    return {
        "lexicon": str(root / "demo_lexicon.tsv"),
        "stopwords": str(root / "demo_stopwords.txt"),
        "corpora": [CorpusSpec(str(root / "demo_corpus.csv"), "demo")],
    }


# -- loading helpers ---------------------------------------------------------

def _load_lexicon(m: RunManifest) -> Lexicon:
    if not m.lexicon:
        raise UsageError("no lexicon given (--lexicon)")
    if not Path(m.lexicon).is_file():
        raise UsageError(f"lexicon file not found: {m.lexicon}")
    try:
        lex = load_lexicon(m.lexicon, has_header=m.lexicon_has_header)
    except EmoframeError as exc:
        raise EmoframeError(f"{m.lexicon}: {exc}") from None
    if lex.skipped_out_of_vocabulary:
        log.info("lexicon: skipped %d out-of-vocabulary rows", lex.skipped_out_of_vocabulary)
    return lex


def _load_stopwords(m: RunManifest):
    if not m.stopwords:
        return EMPTY_STOPWORDS
    if not Path(m.stopwords).is_file():
        raise UsageError(f"stopword file not found: {m.stopwords}")
    return load_stopwords(m.stopwords)


def _load_corpora(m: RunManifest) -> dict[str, Corpus]:
    if not m.corpora:
        raise UsageError("no corpus given (--corpus)")
    labels = parse_label_map(m.label_map)
    out: dict[str, Corpus] = {}
    for spec in m.corpora:
        if not Path(spec.path).is_file():
            raise UsageError(f"corpus file not found: {spec.path}")
        domain = spec.domain or ("" if m.domain_field else Path(spec.path).stem)
        try:
            found = load_corpus(spec.path, spec.format, field_map=m.field_map, label_map=labels, domain=domain)
        except EmoframeError as exc:
            raise EmoframeError(f"{spec.path}: {exc}") from None
        for d, corpus in found.items():
            if d in out:
                raise ConfigError(f"domain {d!r} appears in more than one corpus")
            if corpus.dropped_empty:
                log.info("%s: dropped %d rows with empty text", d, corpus.dropped_empty)
            out[d] = corpus
    return out


def _write(data: bytes, path: str | Path | None) -> None:
    if path is None or str(path) == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(path).write_bytes(data)


# -- subcommands -------------------------------------------------------------

def cmd_run(args: argparse.Namespace) -> int:
    m = build_manifest(args)
    config = m.config()
    lexicon = _load_lexicon(m)
    stops = _load_stopwords(m)
    corpora = _load_corpora(m)

    results = {}
    for domain, corpus in corpora.items():
        res = run_pipeline(corpus, lexicon, stops, config, threads=m.threads, drop_numeric=m.drop_numeric)
        for warning in res.warnings:
            print(f"warning: {domain}: {warning}", file=sys.stderr)
        if res.duplicates_removed:
            log.info("%s: removed %d duplicate publications", domain, res.duplicates_removed)
        results[domain] = res

    tables = [r.table for r in results.values()]
    columns = {d: r.rows for d, r in results.items()}
    quant = render_quantifications(tables, m.format, m.decimals)
    chars = render_characterization(columns, m.format, ascii=m.ascii, mu=m.mu, decimals=m.decimals)

    if m.out is None:
        if m.emit_intermediate:
            raise UsageError("--emit-intermediate needs --out DIR")
        _write(quant + b"\n" + chars, None)
        return EXIT_OK
    out = Path(m.out)
    out.mkdir(parents=True, exist_ok=True)
    ext = EXTENSIONS[m.format]
    _write(quant, out / f"quantification.{ext}")
    _write(chars, out / f"characterization.{ext}")
    if m.emit_intermediate:
        for d, r in results.items():
            with open(out / f"emotionalized-{_safe(d)}.jsonl", "w", encoding="utf-8", newline="\n") as fh:
                dump_emotionalized(r.documents, fh)
    return EXIT_OK


def _safe(name: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_." else "_" for ch in name) or "corpus"


def cmd_emotionalize(args: argparse.Namespace) -> int:
    m = build_manifest(args)
    config = m.config()
    lexicon = _load_lexicon(m)
    stops = _load_stopwords(m)
    corpora = _load_corpora(m)
    docs = []
    for corpus in corpora.values():
        pubs = dedup_corpus(corpus, normalize).corpus.publications
        tokenized = [(preprocess(p, stops, m.drop_numeric), p.label) for p in pubs]
        docs.extend(emotionalize_corpus(tokenized, lexicon, config.tau, m.threads))
    if m.out is None:
        dump_emotionalized(docs, sys.stdout)
    else:
        with open(m.out, "w", encoding="utf-8", newline="\n") as fh:
            dump_emotionalized(docs, fh)
    return EXIT_OK


def cmd_quantify(args: argparse.Namespace) -> int:
    m = build_manifest(args)
    path = Path(args.input)
    if not path.is_file():
        raise UsageError(f"emotionalized corpus not found: {path}")
    with open(path, encoding="utf-8") as fh:
        docs = load_emotionalized(fh)
    unknown = {e for d in docs for e in d.markers()} - set(DEFAULT_EMOTIONS)
    if unknown:
        raise EmoframeError(f"{path}: unknown emotion markers: {', '.join(sorted(unknown))}")
    table = quantify(docs, m.emotions, args.domain or path.stem, threads=m.threads)
    _write(render_quantification(table, m.format, m.decimals), m.out)
    return EXIT_OK


def cmd_characterize(args: argparse.Namespace) -> int:
    m = build_manifest(args)
    path = Path(args.input)
    if not path.is_file():
        raise UsageError(f"quantification file not found: {path}")
    fmt = args.input_format or ("json" if path.suffix.lower() == ".json" else "csv")
    with open(path, encoding="utf-8", newline="") as fh:
        try:
            tables = read_quantification(fh, fmt, domain=args.domain or "")
        except EmoframeError as exc:
            raise UsageError(f"{path}: {exc}") from None
    if not tables:
        raise UsageError(f"{path}: no rows")

    columns = {}
    for d, table in tables.items():
        selected = [e for e in m.emotions if e in table.emotions] if m.emotions_explicit else list(table.emotions)
        columns[d] = characterize(table, m.mu, selected)

    _write(render_characterization(columns, m.format, ascii=m.ascii, mu=m.mu, decimals=m.decimals), m.out)

    if args.expected:
        if not Path(args.expected).is_file():
            raise UsageError(f"expected-symbols file not found: {args.expected}")
        with open(args.expected, encoding="utf-8", newline="") as fh:
            expected = read_expected_symbols(fh, domain=args.domain or "")
        found = find_discrepancies(columns, expected)
        total = sum(1 for d, rows in columns.items() for r in rows if (d, r.emotion) in expected)
        report = render_discrepancies(found, expected_interval(columns, expected), total, ascii=m.ascii)
        if args.discrepancy_out:
            Path(args.discrepancy_out).write_bytes(report)
        elif m.format in ("csv", "json") and m.out is None:
            sys.stderr.write(report.decode("utf-8"))
        else:
            sys.stdout.buffer.write(b"\n" + report)
            sys.stdout.flush()
    return EXIT_OK


def cmd_validate_lexicon(args: argparse.Namespace) -> int:
    m = build_manifest(args)
    m.lexicon = args.input
    lex = _load_lexicon(m)
    print(f"lexicon: {args.input}")
    print(f"kind: {lex.source_kind}")
    print(f"words: {len(lex)}")
    print(f"associations: {lex.n_associations()}")
    counts = lex.emotion_counts(tau=m.tau)
    for e in m.emotions:
        print(f"  {e}: {counts[e]} words at intensity >= {m.tau}")
    if lex.skipped_out_of_vocabulary:
        detail = ", ".join(f"{k}={v}" for k, v in sorted(lex.skipped_by_emotion.items()))
        print(f"skipped out-of-vocabulary rows: {lex.skipped_out_of_vocabulary} ({detail})")
    return EXIT_OK


# -- argument parsing --------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help=f"JSON manifest (default: ${CONFIG_ENV})")
    p.add_argument("--emotions", help="comma-separated emotion subset, in report order")
    p.add_argument("--format", choices=list(EXTENSIONS), help="report format (default text)")
    p.add_argument("--decimals", type=int, help="display decimals for percentages (default 2)")
    p.add_argument("--ascii", action="store_true", default=None, help="write up/down/eq instead of arrows")
    p.add_argument("--out", help="output path (default standard output)")
    p.add_argument("--threads", type=int, help="worker threads (default: all cores)")
    p.add_argument("--tau", type=float, help=f"intensity threshold in [0, 1] (default {DEFAULT_TAU})")
    p.add_argument("--mu", help=f"margin > 0 for the = band (default {DEFAULT_MU})")


def _add_corpus(p: argparse.ArgumentParser) -> None:
    p.add_argument("--lexicon", help="tab-separated word/emotion/value lexicon")
    p.add_argument("--lexicon-has-header", dest="lexicon_has_header", action="store_true", default=None)
    p.add_argument("--corpus", dest="corpora", action="append", type=parse_corpus_arg, default=[],
                   metavar="[DOMAIN=]PATH", help="labeled corpus file; repeatable")
    p.add_argument("--corpus-format", dest="corpus_format", choices=["csv", "jsonl"],
                   help="corpus file format (default: from extension)")
    p.add_argument("--stopwords", help="stopword file, one token per line")
    p.add_argument("--drop-numeric", dest="drop_numeric", action="store_true", default=None)
    p.add_argument("--id-field", dest="id_field")
    p.add_argument("--text-field", dest="text_field")
    p.add_argument("--label-field", dest="label_field")
    p.add_argument("--domain-field", dest="domain_field")
    p.add_argument("--label-map", dest="label_map", help="e.g. fake=Fake,real=NoFake")
    p.add_argument("--demo", action="store_true", help="use the bundled demo lexicon/corpus/stopwords")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="emoframe", description="Characterize emotions in Fake vs. noFake corpora.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="full pipeline: dedup, preprocess, emotionalize, quantify, characterize")
    _add_common(p)
    _add_corpus(p)
    p.add_argument("--emit-intermediate", dest="emit_intermediate", action="store_true", default=None,
                   help="also write the emotionalized corpus (JSONL) per domain")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("emotionalize", help="write the emotionalized corpus as JSONL")
    _add_common(p)
    _add_corpus(p)
    p.set_defaults(func=cmd_emotionalize)

    p = sub.add_parser("quantify", help="quantify an emotionalized JSONL corpus")
    _add_common(p)
    p.add_argument("input", help="emotionalized JSONL")
    p.add_argument("--domain", help="domain name (default: file stem)")
    p.set_defaults(func=cmd_quantify)

    p = sub.add_parser("characterize", help="contrast and symbols from a percentages table")
    _add_common(p)
    p.add_argument("input", help="quantification csv or json")
    p.add_argument("--input-format", choices=["csv", "json"])
    p.add_argument("--domain", help="domain for rows without one")
    p.add_argument("--expected", help="csv of expected symbols to check against")
    p.add_argument("--discrepancy-out", help="where to write the discrepancy report")
    p.set_defaults(func=cmd_characterize)

    p = sub.add_parser("validate-lexicon", help="parse a lexicon and print a summary")
    _add_common(p)
    p.add_argument("input", help="lexicon file")
    p.add_argument("--lexicon-has-header", dest="lexicon_has_header", action="store_true", default=None)
    p.set_defaults(func=cmd_validate_lexicon)
    return parser


def _apply_corpus_format(args: argparse.Namespace) -> None:
    fmt = getattr(args, "corpus_format", None)
    if fmt:
        for spec in args.corpora:
            spec.format = fmt


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    _apply_corpus_format(args)
    try:
        return args.func(args)
    except (EmoframeError, OSError, UnicodeDecodeError) as exc:
        print(f"emoframe: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - last resort
        log.exception("internal error")
        print(f"emoframe: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
