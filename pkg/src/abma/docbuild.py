"""Expand keyword-hit sentences into context-window documents.

Each hit sentence is widened by ``window`` neighbors on each side (clipped at
transcript edges); windows that overlap or touch are merged, so every hit
index ends up in exactly one contiguous document.  Document text joins the
member sentences with single spaces.  The topics that triggered inclusion ride
along as metadata only; classifiers never see them.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Mapping, Sequence

from .corpus import Sentence, Transcript
from .errors import DataError
from .lexicon import Hit


@dataclass(frozen=True)
class Document:
    doc_id: str
    company: str
    call_date: date
    transcript_id: str
    sentence_indices: tuple[int, ...]
    text: str
    hit_topics: frozenset[str]


def make_doc_id(transcript_id: str, first_index: int, last_index: int) -> str:
    """Stable digest identifying a contiguous sentence run within a transcript."""
    key = f"{transcript_id}|{first_index}-{last_index}"
    return hashlib.sha256(key.encode("utf-8")).hexdigest()[:16]


def _merge_ranges(ranges: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Union of inclusive index ranges; adjacent ranges (max+1 == min) merge too."""
    merged: list[tuple[int, int]] = []
    for lo, hi in sorted(ranges):
        if merged and lo <= merged[-1][1] + 1:
            merged[-1] = (merged[-1][0], max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def build_documents(
    transcripts: Sequence[Transcript] | Mapping[str, Transcript],
    sentences: Iterable[Sentence],
    hits: Iterable[Hit],
    window: int = 1,
) -> list[Document]:
    """Build merged context-window documents from hits.

    ``window`` = 0 degenerates to one singleton document per hit sentence.
    Output is ordered by (transcript_id, first sentence index).
    """
    if window < 0:
        raise DataError(f"window must be non-negative, got {window}")
    if isinstance(transcripts, Mapping):
        by_id = dict(transcripts)
    else:
        by_id = {t.transcript_id: t for t in transcripts}

    sentences_by_transcript: dict[str, dict[int, Sentence]] = {}
    for s in sentences:
        sentences_by_transcript.setdefault(s.transcript_id, {})[s.index] = s

    hit_indices: dict[str, set[int]] = {}
    topics_by_sentence: dict[tuple[str, int], set[str]] = {}
    for h in hits:
        tsents = sentences_by_transcript.get(h.transcript_id)
        if tsents is None or h.sentence_index not in tsents:
            raise DataError(
                f"hit references missing sentence {h.transcript_id}[{h.sentence_index}]"
            )
        hit_indices.setdefault(h.transcript_id, set()).add(h.sentence_index)
        topics_by_sentence.setdefault((h.transcript_id, h.sentence_index), set()).add(h.topic)

    documents: list[Document] = []
    for transcript_id in sorted(hit_indices):
        if transcript_id not in by_id:
            raise DataError(f"hit references unknown transcript {transcript_id}")
        transcript = by_id[transcript_id]
        tsents = sentences_by_transcript[transcript_id]
        max_index = max(tsents)
        ranges = [
            (max(0, i - window), min(max_index, i + window))
            for i in sorted(hit_indices[transcript_id])
        ]
        for lo, hi in _merge_ranges(ranges):
            indices = tuple(range(lo, hi + 1))
            topics: set[str] = set()
            for i in indices:
                topics.update(topics_by_sentence.get((transcript_id, i), ()))
            documents.append(
                Document(
                    doc_id=make_doc_id(transcript_id, lo, hi),
                    company=transcript.ticker,
                    call_date=transcript.call_date,
                    transcript_id=transcript_id,
                    sentence_indices=indices,
                    text=" ".join(tsents[i].text for i in indices),
                    hit_topics=frozenset(topics),
                )
            )
    return documents
