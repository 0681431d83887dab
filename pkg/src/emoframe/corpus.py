"""Labeled publication corpora: ingestion from CSV/JSONL and duplicate removal."""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, TextIO

from .errors import ConfigError, IngestError


class PublicationClass(enum.Enum):
    FAKE = "fake"
    NOFAKE = "nofake"

    @property
    def display(self) -> str:
        return "Fake" if self is PublicationClass.FAKE else "noFake"

    @property
    def other(self) -> "PublicationClass":
        return PublicationClass.NOFAKE if self is PublicationClass.FAKE else PublicationClass.FAKE

    @classmethod
    def parse(cls, value: str) -> "PublicationClass":
        key = value.strip().lower()
        for member in cls:
            if member.value == key or member.name.lower() == key:
                return member
        raise ValueError(f"not a publication class: {value!r}")


@dataclass(frozen=True)
class Publication:
    id: str
    text: str
    label: PublicationClass
    domain: str = ""


@dataclass(frozen=True)
class Corpus:
    publications: tuple[Publication, ...]
    domain: str = ""
    dropped_empty: int = 0

    def __post_init__(self):
        seen = set()
        for pub in self.publications:
            if pub.id in seen:
                raise IngestError(f"duplicate publication id {pub.id!r}")
            seen.add(pub.id)
            if pub.domain != self.domain:
                raise IngestError(f"publication {pub.id!r} has domain {pub.domain!r}, corpus is {self.domain!r}")

    def __len__(self) -> int:
        return len(self.publications)

    def __iter__(self) -> Iterator[Publication]:
        return iter(self.publications)

    def class_sizes(self) -> dict[PublicationClass, int]:
        sizes = {c: 0 for c in PublicationClass}
        for pub in self.publications:
            sizes[pub.label] += 1
        return sizes

    def swap_labels(self) -> "Corpus":
        pubs = tuple(Publication(p.id, p.text, p.label.other, p.domain) for p in self.publications)
        return Corpus(pubs, self.domain, self.dropped_empty)


@dataclass(frozen=True)
class FieldMap:
    id: str = "id"
    text: str = "text"
    label: str = "label"
    domain: str | None = None


def parse_label_map(spec: str | Mapping[str, str] | None) -> dict[str, PublicationClass]:
    """Build a case-insensitive label map.

    ``spec`` is either ``"fake=Fake,real=NoFake"`` or a mapping of the same
    shape. The canonical labels ``fake`` and ``nofake`` are always accepted.
    """
    out = {c.value: c for c in PublicationClass}
    if not spec:
        return out
    items = spec.items() if isinstance(spec, Mapping) else _split_pairs(spec)
    for raw, target in items:
        try:
            out[str(raw).strip().lower()] = PublicationClass.parse(str(target))
        except ValueError:
            raise ConfigError(f"label map target {target!r} must be Fake or NoFake") from None
    return out


def _split_pairs(spec: str):
    for chunk in spec.split(","):
        if not chunk.strip():
            continue
        if "=" not in chunk:
            raise ConfigError(f"label map entry {chunk!r} is not of the form value=Class")
        raw, target = chunk.split("=", 1)
        yield raw, target


def _iter_records(stream: TextIO, fmt: str) -> Iterator[tuple[int, dict]]:
    if fmt == "csv":
        reader = csv.DictReader(stream)
        if reader.fieldnames is None:
            return
        # row numbers count the header as row 1
        for n, row in enumerate(reader, start=2):
            if None in row:
                raise IngestError("more fields than the header declares", n)
            yield n, row
    elif fmt == "jsonl":
        for n, line in enumerate(stream, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise IngestError(f"invalid JSON: {exc.msg}", n) from None
            if not isinstance(obj, dict):
                raise IngestError("expected a JSON object", n)
            yield n, obj
    else:
        raise ConfigError(f"unknown corpus format {fmt!r}; expected csv or jsonl")


def _field(record: dict, name: str, n: int):
    if name not in record or record[name] is None:
        raise IngestError(f"missing field {name!r}", n)
    value = record[name]
    return value if isinstance(value, str) else str(value)


def ingest_domains(stream: TextIO | str, fmt: str = "csv", field_map: FieldMap = FieldMap(),
                   label_map: Mapping[str, PublicationClass] | None = None,
                   domain: str = "") -> dict[str, Corpus]:
    """Read a labeled corpus, returning one :class:`Corpus` per domain in first-seen order.

    Without ``field_map.domain`` every row goes to ``domain``.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    labels = dict(label_map) if label_map is not None else parse_label_map(None)
    grouped: dict[str, list[Publication]] = {}
    dropped: dict[str, int] = {}
    if domain:
        grouped[domain] = []
    for n, rec in _iter_records(stream, fmt):
        pid = _field(rec, field_map.id, n)
        text = _field(rec, field_map.text, n)
        raw_label = _field(rec, field_map.label, n)
        dom = _field(rec, field_map.domain, n) if field_map.domain else domain
        label = labels.get(raw_label.strip().lower())
        if label is None:
            raise IngestError(f"unmapped label value {raw_label!r}", n)
        grouped.setdefault(dom, [])
        if not text.strip():
            dropped[dom] = dropped.get(dom, 0) + 1
            continue
        grouped[dom].append(Publication(pid, text, label, dom))
    return {d: Corpus(tuple(pubs), d, dropped.get(d, 0)) for d, pubs in grouped.items()}


def ingest(stream: TextIO | str, fmt: str = "csv", field_map: FieldMap = FieldMap(),
           label_map: Mapping[str, PublicationClass] | None = None, domain: str = "") -> Corpus:
    """Single-domain variant of :func:`ingest_domains`."""
    corpora = ingest_domains(stream, fmt, field_map, label_map, domain)
    if not corpora:
        return Corpus((), domain)
    if len(corpora) > 1:
        raise IngestError(f"input spans several domains ({', '.join(corpora)}); use ingest_domains")
    return next(iter(corpora.values()))


def load_corpus(path, fmt: str | None = None, **kwargs) -> dict[str, Corpus]:
    if fmt is None:
        fmt = "jsonl" if str(path).endswith((".jsonl", ".ndjson")) else "csv"
    with open(path, encoding="utf-8", newline="") as fh:
        return ingest_domains(fh, fmt, **kwargs)


@dataclass(frozen=True)
class DedupResult:
    corpus: Corpus
    removed: int
    removed_ids: tuple[str, ...] = field(default=())


def dedup_corpus(corpus: Corpus, normalizer: Callable[[str], str]) -> DedupResult:
    """Keep the first publication for each distinct ``normalizer(text)``."""
    seen: set[str] = set()
    kept: list[Publication] = []
    removed: list[str] = []
    for pub in corpus.publications:
        key = normalizer(pub.text)
        if key in seen:
            removed.append(pub.id)
            continue
        seen.add(key)
        kept.append(pub)
    return DedupResult(Corpus(tuple(kept), corpus.domain, corpus.dropped_empty), len(removed), tuple(removed))


def write_jsonl(publications: Iterable[Publication], fh: TextIO, field_map: FieldMap = FieldMap()) -> None:
    for pub in publications:
        rec = {field_map.id: pub.id, field_map.text: pub.text, field_map.label: pub.label.value}
        if field_map.domain:
            rec[field_map.domain] = pub.domain
        fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def write_csv(publications: Iterable[Publication], fh: TextIO, field_map: FieldMap = FieldMap()) -> None:
    cols = [field_map.id, field_map.text, field_map.label] + ([field_map.domain] if field_map.domain else [])
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(cols)
    for pub in publications:
        row = [pub.id, pub.text, pub.label.value] + ([pub.domain] if field_map.domain else [])
        writer.writerow(row)
