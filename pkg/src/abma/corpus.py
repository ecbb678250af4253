"""Earnings-call corpus ingestion and sentence splitting.

Transcripts arrive as tabular rows (CSV or JSONL) with four required fields:
company_name, ticker, call_date, body.  Rows with missing or malformed fields
become per-row rejection records instead of being dropped silently.  Company
identity is the ticker symbol; (ticker, call_date) must be unique.

Sentence splitting is rule-based and deterministic: split after ``.``, ``!`` or
``?`` when followed by whitespace and an uppercase letter or digit, except
after known abbreviations.  Decimal numbers ("$4.5 billion") never split
because the terminator must be followed by whitespace.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from datetime import date, datetime
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DataError

REQUIRED_FIELDS = ("company_name", "ticker", "call_date", "body")

# Tokens ending in "." that do not terminate a sentence (compared case-insensitively).
ABBREVIATIONS = frozenset(
    t.lower()
    for t in (
        "Inc.",
        "Corp.",
        "Mr.",
        "Q1.",
        "Q2.",
        "Q3.",
        "Q4.",
        "U.S.",
        "e.g.",
        "i.e.",
    )
)

_TERMINATORS = ".!?"


@dataclass(frozen=True)
class Transcript:
    company_name: str
    ticker: str
    call_date: date
    body: str

    @property
    def transcript_id(self) -> str:
        return f"{self.ticker}_{self.call_date.isoformat()}"


@dataclass(frozen=True)
class Sentence:
    transcript_id: str
    index: int
    text: str


@dataclass(frozen=True)
class Rejection:
    row_number: int  # 1-based data row number (header excluded for CSV)
    reason: str


@dataclass(frozen=True)
class CorpusStats:
    transcript_count: int
    company_count: int
    sentence_count: int
    date_range: tuple[date, date] | None


@dataclass(frozen=True)
class LoadResult:
    transcripts: list[Transcript]
    rejections: list[Rejection]

    @property
    def total_rows(self) -> int:
        return len(self.transcripts) + len(self.rejections)


def parse_call_date(raw: str) -> date:
    """Parse ISO-8601 or MM/DD/YYYY; everything is normalized to a date."""
    raw = raw.strip()
    try:
        return date.fromisoformat(raw)
    except ValueError:
        pass
    try:
        return datetime.strptime(raw, "%m/%d/%Y").date()
    except ValueError:
        raise DataError(f"unparseable call_date: {raw!r}") from None


def _row_to_transcript(row: dict, row_number: int) -> Transcript | Rejection:
    for field in REQUIRED_FIELDS:
        value = row.get(field)
        if value is None or not str(value).strip():
            return Rejection(row_number, f"empty {field}")
    try:
        call_date = parse_call_date(str(row["call_date"]))
    except DataError as exc:
        return Rejection(row_number, str(exc))
    return Transcript(
        company_name=str(row["company_name"]).strip(),
        ticker=str(row["ticker"]).strip(),
        call_date=call_date,
        body=str(row["body"]),
    )


def _iter_rows(path: Path, fmt: str) -> Iterable[dict]:
    if fmt == "csv":
        with path.open(newline="", encoding="utf-8") as fh:
            yield from csv.DictReader(fh)
    elif fmt == "jsonl":
        with path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise DataError(f"{path}:{lineno}: invalid JSON: {exc}") from None
                if not isinstance(obj, dict):
                    raise DataError(f"{path}:{lineno}: expected a JSON object")
                yield obj
    else:
        raise DataError(f"unknown corpus format: {fmt!r} (expected csv or jsonl)")


def load_transcripts(path: str | Path, fmt: str | None = None) -> LoadResult:
    """Load transcripts, collecting per-row rejections for malformed rows.

    Duplicate (ticker, call_date) keys violate the corpus invariant and are
    fatal; the error names every colliding key.
    """
    path = Path(path)
    if fmt is None:
        fmt = "jsonl" if path.suffix.lower() in (".jsonl", ".ndjson") else "csv"

    transcripts: list[Transcript] = []
    rejections: list[Rejection] = []
    for row_number, row in enumerate(_iter_rows(path, fmt), start=1):
        result = _row_to_transcript(row, row_number)
        if isinstance(result, Rejection):
            rejections.append(result)
        else:
            transcripts.append(result)

    seen: dict[tuple[str, str], int] = {}
    duplicates: set[tuple[str, str]] = set()
    for t in transcripts:
        key = (t.ticker, t.call_date.isoformat())
        seen[key] = seen.get(key, 0) + 1
        if seen[key] > 1:
            duplicates.add(key)
    if duplicates:
        named = ", ".join(f"{t}/{d}" for t, d in sorted(duplicates))
        raise DataError(f"duplicate (ticker, call_date) keys: {named}")

    return LoadResult(transcripts, rejections)


def _is_boundary(body: str, i: int) -> bool:
    """True when the terminator at position i ends a sentence."""
    j = i + 1
    if j >= len(body) or not body[j].isspace():
        return False
    while j < len(body) and body[j].isspace():
        j += 1
    if j >= len(body):
        return True
    nxt = body[j]
    if not (nxt.isupper() or nxt.isdigit()):
        return False
    if body[i] == ".":
        # Token ending at the period, e.g. "Inc." out of "Apple Inc. Today".
        k = i
        while k > 0 and not body[k - 1].isspace():
            k -= 1
        if body[k : i + 1].lower() in ABBREVIATIONS:
            return False
    return True


def split_sentences(transcript: Transcript) -> list[Sentence]:
    """Split a transcript body into indexed sentences.

    Every sentence is a trimmed substring of the body and concatenating them
    in order preserves the body's non-whitespace characters exactly.
    """
    body = transcript.body
    if not body.strip():
        raise DataError(f"transcript {transcript.transcript_id} has an empty body")

    sentences: list[Sentence] = []
    start = 0
    index = 0

    def emit(end: int) -> None:
        nonlocal start, index
        text = body[start:end].strip()
        if text:
            sentences.append(Sentence(transcript.transcript_id, index, text))
            index += 1
        start = end

    for i, ch in enumerate(body):
        if ch in _TERMINATORS and _is_boundary(body, i):
            emit(i + 1)
    emit(len(body))
    return sentences


def corpus_stats(
    transcripts: Sequence[Transcript], sentences: Sequence[Sentence]
) -> CorpusStats:
    if not transcripts:
        return CorpusStats(0, 0, len(sentences), None)
    dates = [t.call_date for t in transcripts]
    return CorpusStats(
        transcript_count=len(transcripts),
        company_count=len({t.ticker for t in transcripts}),
        sentence_count=len(sentences),
        date_range=(min(dates), max(dates)),
    )
