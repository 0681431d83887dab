"""Rendering of quantification/characterization results, and reading them back.

All renderers return UTF-8 bytes with ``\\n`` line endings and locale-free
number formatting, so output is byte-identical across platforms.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Mapping, Sequence, TextIO

from .corpus import PublicationClass
from .errors import EmoframeError
from .pipeline import (
    CharacterizationRow,
    MuInterval,
    Number,
    QuantificationTable,
    Symbol,
    feasible_mu_interval,
)

FORMATS = ("text", "markdown", "csv", "json")

FAKE = PublicationClass.FAKE
NOFAKE = PublicationClass.NOFAKE
CLASSES = (NOFAKE, FAKE)

Columns = Mapping[str, Sequence[CharacterizationRow]]


def round_half_up(x: Number, decimals: int) -> Decimal:
    if decimals < 0:
        raise ValueError("decimals must be >= 0")
    return Decimal(str(x)).quantize(Decimal(1).scaleb(-decimals), rounding=ROUND_HALF_UP)


def format_percent(x: Number, decimals: int = 2) -> str:
    q = round_half_up(x, decimals)
    if q == 0:
        q = abs(q)
    return f"{q}%"


def _num(x: Number):
    """JSON-safe number; Decimals become floats."""
    return float(x) if isinstance(x, Decimal) else x


def _exact(x: Number) -> str:
    return str(x) if isinstance(x, Decimal) else repr(float(x))


def _title(emotion: str) -> str:
    return emotion[:1].upper() + emotion[1:]


def _align(rows: list[list[str]]) -> str:
    if not rows:
        return ""
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = []
    for r in rows:
        cells = [c.ljust(w) for c, w in zip(r, widths)]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def _md_table(rows: list[list[str]]) -> str:
    head, body = rows[0], rows[1:]
    out = ["| " + " | ".join(head) + " |", "|" + "|".join("---" for _ in head) + "|"]
    out += ["| " + " | ".join(r) + " |" for r in body]
    return "\n".join(out) + "\n"


def _check_format(fmt: str) -> None:
    if fmt not in FORMATS:
        raise EmoframeError(f"unknown report format {fmt!r}; expected one of {', '.join(FORMATS)}")


# -- quantification ----------------------------------------------------------

def render_quantification(table: QuantificationTable, fmt: str = "text", decimals: int = 2) -> bytes:
    _check_format(fmt)
    if decimals < 0:
        raise ValueError("decimals must be >= 0")
    return {
        "text": _quant_text,
        "markdown": _quant_markdown,
        "csv": _quant_csv,
        "json": _quant_json,
    }[fmt](table, decimals).encode("utf-8")


def _quant_text(table: QuantificationTable, decimals: int) -> str:
    rows = [["Emotion", "noFake", "Fake"]]
    for e in table.emotions:
        rows.append([_title(e)] + [format_percent(table.percentage(e, c), decimals) for c in CLASSES])
    out = []
    if table.domain:
        out.append(f"Quantification: {table.domain}\n")
    out.append(_align(rows))
    if table.has_counts:
        out.append(f"Words: noFake={table.word_counts[NOFAKE]} Fake={table.word_counts[FAKE]} "
                   "(after stopword removal)\n")
        if table.raw_word_counts is not None:
            out.append(f"Words before stopword removal: noFake={table.raw_word_counts[NOFAKE]} "
                       f"Fake={table.raw_word_counts[FAKE]}\n")
    for c in sorted(table.degenerate, key=lambda c: c.value):
        out.append(f"warning: class {c.display} has no words; percentages set to 0\n")
    return "".join(out)


def _quant_markdown(table: QuantificationTable, decimals: int) -> str:
    rows = [["Emotion", "noFake", "Fake"]]
    for e in table.emotions:
        cells = [format_percent(table.percentage(e, c), decimals) for c in CLASSES]
        a, b = (round_half_up(table.percentage(e, c), decimals) for c in CLASSES)
        # bold the class in which the emotion is more frequent
        if a > b:
            cells[0] = f"**{cells[0]}**"
        elif b > a:
            cells[1] = f"**{cells[1]}**"
        rows.append([_title(e)] + cells)
    head = f"### {table.domain}\n\n" if table.domain else ""
    return head + _md_table(rows)


QUANT_CSV_COLUMNS = [
    "domain", "emotion",
    "nofake_count", "fake_count", "nofake_words", "fake_words",
    "nofake_pct", "fake_pct", "nofake_display", "fake_display",
]


def _quant_csv(table: QuantificationTable, decimals: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(QUANT_CSV_COLUMNS)
    for e in table.emotions:
        counts = ([table.count(e, c) for c in CLASSES] + [table.word_counts[c] for c in CLASSES]
                  if table.has_counts else ["", "", "", ""])
        w.writerow([table.domain, e, *counts,
                    *(_exact(table.percentage(e, c)) for c in CLASSES),
                    *(format_percent(table.percentage(e, c), decimals) for c in CLASSES)])
    return buf.getvalue()


def quantification_to_dict(table: QuantificationTable, decimals: int = 2) -> dict:
    rows = []
    for e in table.emotions:
        row = {"emotion": e}
        for c in CLASSES:
            cell = {"percentage": _num(table.percentage(e, c)),
                    "display": format_percent(table.percentage(e, c), decimals)}
            if table.has_counts:
                cell["count"] = table.count(e, c)
            raw = table.raw_percentage(e, c)
            if raw is not None:
                cell["percentage_before_stopwords"] = raw
            row[c.value] = cell
        rows.append(row)
    out = {"domain": table.domain, "emotions": list(table.emotions), "decimals": decimals, "rows": rows}
    if table.has_counts:
        out["word_counts"] = {c.value: table.word_counts[c] for c in CLASSES}
    if table.raw_word_counts is not None:
        out["word_counts_before_stopwords"] = {c.value: table.raw_word_counts[c] for c in CLASSES}
    out["degenerate_classes"] = sorted(c.value for c in table.degenerate)
    return out


def _quant_json(table: QuantificationTable, decimals: int) -> str:
    return json.dumps(quantification_to_dict(table, decimals), ensure_ascii=False, indent=2) + "\n"


def render_quantifications(tables: Sequence[QuantificationTable], fmt: str = "text", decimals: int = 2) -> bytes:
    """Several domains in one document (json: a list; csv: one header)."""
    _check_format(fmt)
    if fmt == "json":
        data = [quantification_to_dict(t, decimals) for t in tables]
        return (json.dumps(data, ensure_ascii=False, indent=2) + "\n").encode("utf-8")
    if fmt == "csv":
        parts = [_quant_csv(t, decimals) for t in tables]
        head = ",".join(QUANT_CSV_COLUMNS) + "\n"
        return (head + "".join(p.split("\n", 1)[1] for p in parts)).encode("utf-8")
    return "\n".join(render_quantification(t, fmt, decimals).decode("utf-8") for t in tables).encode("utf-8")


# -- characterization --------------------------------------------------------

def _as_columns(rows: Columns | Sequence[CharacterizationRow]) -> Columns:
    if isinstance(rows, Mapping):
        return rows
    return {"": list(rows)}


def _glyph(sym: Symbol, ascii: bool) -> str:
    return sym.ascii if ascii else sym.value


def _emotion_order(columns: Columns) -> list[str]:
    order: list[str] = []
    for rows in columns.values():
        for r in rows:
            if r.emotion not in order:
                order.append(r.emotion)
    return order


def stability(columns: Columns) -> MuInterval:
    return feasible_mu_interval(((r.emotion, d), r.variation, r.symbol)
                                for d, rows in columns.items() for r in rows)


def _cell_name(key) -> str:
    emotion, domain = key
    return f"{emotion}/{domain}" if domain else emotion


def render_characterization(rows: Columns | Sequence[CharacterizationRow], fmt: str = "text",
                            ascii: bool = False, mu: Number | None = None, decimals: int = 2) -> bytes:
    """Render one (list of rows) or several (``{domain: rows}``) symbol columns."""
    _check_format(fmt)
    columns = _as_columns(rows)
    return {
        "text": _char_text,
        "markdown": _char_markdown,
        "csv": _char_csv,
        "json": _char_json,
    }[fmt](columns, ascii, mu, decimals).encode("utf-8")


def _symbol_grid(columns: Columns, ascii: bool) -> list[list[str]]:
    names = [d or "Symbol" for d in columns]
    grid = [["Emotion"] + names]
    lookup = {d: {r.emotion: r for r in rows} for d, rows in columns.items()}
    for e in _emotion_order(columns):
        cells = []
        for d in columns:
            r = lookup[d].get(e)
            cells.append(_glyph(r.symbol, ascii) if r else "")
        grid.append([_title(e)] + cells)
    return grid


def stability_note(columns: Columns, mu: Number | None, decimals: int = 4) -> str:
    interval = stability(columns)
    lines = []
    if mu is not None:
        lines.append(f"mu = {mu}")
    lines.append(f"symbols unchanged for mu in {interval.describe(decimals)}")
    if interval.binding_upper:
        lines.append("upper bound set by: " + ", ".join(_cell_name(k) for k in interval.binding_upper))
    if interval.binding_lower:
        lines.append("lower bound set by: " + ", ".join(_cell_name(k) for k in interval.binding_lower))
    return "".join(f"# {line}\n" for line in lines)


def _char_text(columns: Columns, ascii: bool, mu, decimals: int) -> str:
    out = _align(_symbol_grid(columns, ascii))
    if any(columns.values()):
        out += "\n" + stability_note(columns, mu)
    return out


def _char_markdown(columns: Columns, ascii: bool, mu, decimals: int) -> str:
    out = _md_table(_symbol_grid(columns, ascii))
    if any(columns.values()):
        out += "\n" + "".join(f"> {line[2:]}\n" for line in stability_note(columns, mu).splitlines(keepends=True))
    return out


def _char_csv(columns: Columns, ascii: bool, mu, decimals: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["domain", "emotion", "variation", "symbol"])
    for d, rows in columns.items():
        for r in rows:
            w.writerow([d, r.emotion, _exact(r.variation), _glyph(r.symbol, ascii)])
    return buf.getvalue()


def characterization_to_dict(columns: Columns, ascii: bool = False, mu: Number | None = None) -> dict:
    interval = stability(columns)
    return {
        "mu": _num(mu) if mu is not None else None,
        "domains": [
            {"domain": d,
             "rows": [{"emotion": r.emotion, "variation": _num(r.variation),
                       "symbol": _glyph(r.symbol, ascii)} for r in rows]}
            for d, rows in columns.items()
        ],
        "stable_mu": {
            "lower": _num(interval.lower),
            "upper": _num(interval.upper) if interval.upper is not None else None,
            "lower_inclusive": interval.lower > 0,
            "binding_upper": [list(k) for k in interval.binding_upper],
            "binding_lower": [list(k) for k in interval.binding_lower],
        },
    }


def _char_json(columns: Columns, ascii: bool, mu, decimals: int) -> str:
    return json.dumps(characterization_to_dict(columns, ascii, mu), ensure_ascii=False, indent=2) + "\n"


# -- discrepancies against expected symbols -----------------------------------

@dataclass(frozen=True)
class Discrepancy:
    domain: str
    emotion: str
    variation: Number
    expected: Symbol
    computed: Symbol
    # True when no mu > 0 can yield the expected symbol for this variation
    unreachable: bool


def find_discrepancies(columns: Columns, expected: Mapping[tuple[str, str], Symbol]) -> list[Discrepancy]:
    """Cells whose computed symbol differs from ``expected[(domain, emotion)]``."""
    out = []
    for d, rows in columns.items():
        for r in rows:
            want = expected.get((d, r.emotion))
            if want is None or want is r.symbol:
                continue
            reach = feasible_mu_interval([(None, r.variation, want)])
            out.append(Discrepancy(d, r.emotion, r.variation, want, r.symbol, bool(reach.infeasible)))
    return out


def expected_interval(columns: Columns, expected: Mapping[tuple[str, str], Symbol]) -> MuInterval:
    """Margins reproducing every reachable expected symbol."""
    cells = []
    for d, rows in columns.items():
        for r in rows:
            want = expected.get((d, r.emotion))
            if want is not None:
                cells.append(((r.emotion, d), r.variation, want))
    return feasible_mu_interval(cells)


def render_discrepancies(discrepancies: Sequence[Discrepancy], interval: MuInterval | None = None,
                         total: int | None = None, ascii: bool = False) -> bytes:
    lines = []
    if total is not None:
        lines.append(f"{total - len(discrepancies)} of {total} cells match the expected symbols")
    for dis in discrepancies:
        why = "no mu > 0 can produce the expected symbol" if dis.unreachable else "mu outside the feasible range"
        lines.append(f"discrepancy: {dis.emotion}/{dis.domain}: expected {_glyph(dis.expected, ascii)}, "
                     f"computed {_glyph(dis.computed, ascii)} (V = {_exact(dis.variation)}; {why})")
    if interval is not None:
        lines.append(f"expected symbols reproducible for mu in {interval.describe()}")
        if interval.binding_upper:
            lines.append("upper bound set by: " + ", ".join(_cell_name(k) for k in interval.binding_upper))
        if interval.infeasible:
            lines.append("unreachable cells: " + ", ".join(_cell_name(k) for k in interval.infeasible))
    return "".join(line + "\n" for line in lines).encode("utf-8")


# -- readers -----------------------------------------------------------------

_NOFAKE_KEYS = ("nofake_pct", "nofake", "p_nofake")
_FAKE_KEYS = ("fake_pct", "fake", "p_fake")


def _parse_pct(raw: str, where: str) -> Decimal:
    text = raw.strip().rstrip("%").strip()
    try:
        value = Decimal(text)
    except ArithmeticError:
        raise EmoframeError(f"{where}: not a number: {raw!r}") from None
    if not value.is_finite() or not 0 <= value <= 100:
        raise EmoframeError(f"{where}: percentage {raw!r} outside [0, 100]")
    return value


def read_quantification(stream: TextIO | str, fmt: str = "csv", domain: str = "") -> dict[str, QuantificationTable]:
    """Read percentages (csv or json as written by this module) into count-free tables.

    Values are parsed as exact decimals. CSV needs ``emotion`` plus a noFake
    and a Fake percentage column (``nofake_pct``/``fake_pct``, or
    ``nofake``/``fake``); ``domain`` is optional.
    """
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    values: dict[str, dict[str, tuple[Decimal, Decimal]]] = {}
    if fmt == "csv":
        reader = csv.DictReader(stream)
        header = {h.strip().lower(): h for h in (reader.fieldnames or [])}
        if "emotion" not in header:
            raise EmoframeError("quantification file has no 'emotion' column")
        nf = next((header[k] for k in _NOFAKE_KEYS if k in header), None)
        fk = next((header[k] for k in _FAKE_KEYS if k in header), None)
        missing = [name for name, col in (("noFake", nf), ("Fake", fk)) if col is None]
        if missing:
            raise EmoframeError(f"quantification file lacks a {' and '.join(missing)} percentage column")
        for n, row in enumerate(reader, start=2):
            d = (row.get(header["domain"]) if "domain" in header else None) or domain
            e = row[header["emotion"]].strip().lower()
            values.setdefault(d, {})[e] = (_parse_pct(row[nf], f"row {n}"), _parse_pct(row[fk], f"row {n}"))
    elif fmt == "json":
        try:
            data = json.load(stream, parse_float=Decimal, parse_int=Decimal)
        except json.JSONDecodeError as exc:
            raise EmoframeError(f"invalid JSON: {exc.msg}") from None
        for block in data if isinstance(data, list) else [data]:
            d = block.get("domain") or domain
            for row in block.get("rows", []):
                try:
                    pair = tuple(Decimal(row[c.value]["percentage"]) for c in CLASSES)
                except (KeyError, TypeError):
                    raise EmoframeError(f"row {row.get('emotion')!r} lacks a percentage for both classes") from None
                values.setdefault(d, {})[row["emotion"]] = pair
    else:
        raise EmoframeError(f"unknown quantification format {fmt!r}; expected csv or json")
    return {d: QuantificationTable.from_percentages(d, v) for d, v in values.items()}


def read_expected_symbols(stream: TextIO | str, domain: str = "") -> dict[tuple[str, str], Symbol]:
    """Expected symbols as long csv (``domain,emotion,symbol``) or wide csv (``emotion,<domain>...``)."""
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    reader = csv.DictReader(stream)
    fields = [f.strip() for f in (reader.fieldnames or [])]
    reader.fieldnames = fields
    if "emotion" not in fields:
        raise EmoframeError("expected-symbols file has no 'emotion' column")
    out = {}
    for n, row in enumerate(reader, start=2):
        e = row["emotion"].strip().lower()
        try:
            if "symbol" in fields:
                out[((row.get("domain") or domain).strip(), e)] = Symbol.parse(row["symbol"])
            else:
                for d in fields:
                    if d != "emotion" and row[d] and row[d].strip():
                        out[(d, e)] = Symbol.parse(row[d])
        except ValueError as exc:
            raise EmoframeError(f"row {n}: {exc}") from None
    return out
