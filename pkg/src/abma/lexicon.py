"""Topic-tagged keyword lexicon: compilation and multi-pattern matching.

Term dialect
------------
Lexicon terms mix three notations, classified purely from the raw text:

* ``\\bAI\\b``     -- bounded token: ``\\b`` marks a token boundary.
* ``3D print[a-z]*`` / ``smart product*`` -- suffix wildcard: the prefix plus
  zero or more ASCII letters (greedy), no boundary required after the run.
* anything else  -- literal phrase.

Uniform semantics: every term gets implicit token boundaries at both ends (a
boundary is a position between a word character ``[A-Za-z0-9]`` and a
non-word character or the string edge), except that a wildcard's right edge is
wherever its letter run stops.  Internal whitespace in a term matches any run
of whitespace.  Matching is case-insensitive unless the spec is marked
``case_sensitive``, in which case the matched text must reproduce the term's
exact casing.  Case folding is per-character (length-preserving), so offsets
always refer to the original sentence.

The compiled matcher is an Aho-Corasick automaton over folded, whitespace-
squashed term cores; its hit set is defined to equal a naive per-term scan.
"""

from __future__ import annotations

import csv
import hashlib
import string
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .corpus import Sentence
from .errors import DataError
from .labels import ASPECTS

WORD_CHARS = frozenset(string.ascii_letters + string.digits)
_ASCII_LETTERS = frozenset(string.ascii_letters)
_ASCII_LOWER = frozenset(string.ascii_lowercase)

KIND_LITERAL = "literal_phrase"
KIND_BOUNDED = "bounded_token"
KIND_WILDCARD = "suffix_wildcard"


@dataclass(frozen=True)
class PatternSpec:
    spec_id: int
    raw: str
    kind: str
    normalized: str  # matchable core: \b stripped, wildcard suffix removed, whitespace squashed
    topic: str
    case_sensitive: bool = False
    variant_of: str | None = None


@dataclass(frozen=True)
class Hit:
    transcript_id: str
    sentence_index: int
    spec_id: int
    topic: str
    term: str
    start: int
    end: int


def classify_kind(raw: str) -> str:
    if "\\b" in raw:
        return KIND_BOUNDED
    if raw.endswith("[a-z]*") or raw.endswith("*"):
        return KIND_WILDCARD
    return KIND_LITERAL


def _fold_char(c: str) -> str:
    low = c.lower()
    return low if len(low) == 1 else c


def fold_text(text: str) -> str:
    return "".join(_fold_char(c) for c in text)


def normalize_term(raw: str) -> tuple[str, str]:
    """Return (kind, core).  Raises DataError for constructs outside the dialect."""
    kind = classify_kind(raw)
    core = raw.replace("\\b", "")
    if kind == KIND_WILDCARD:
        core = core[: -len("[a-z]*")] if core.endswith("[a-z]*") else core[:-1]
    if "[" in core or "]" in core:
        raise DataError(f"unparseable character class in term {raw!r}")
    if "*" in core or "\\" in core:
        raise DataError(f"unparseable pattern construct in term {raw!r}")
    core = " ".join(core.split())
    if not core:
        raise DataError(f"empty term {raw!r}")
    return kind, core


class _AcNode:
    __slots__ = ("goto", "fail", "outputs")

    def __init__(self) -> None:
        self.goto: dict[str, _AcNode] = {}
        self.fail: _AcNode | None = None
        self.outputs: list[tuple[int, int]] = []  # (core length, spec_id)


def _build_automaton(specs: Sequence[PatternSpec]) -> _AcNode:
    root = _AcNode()
    for spec in specs:
        node = root
        for ch in fold_text(spec.normalized):
            node = node.goto.setdefault(ch, _AcNode())
        node.outputs.append((len(spec.normalized), spec.spec_id))
    queue: deque[_AcNode] = deque()
    for child in root.goto.values():
        child.fail = root
        queue.append(child)
    while queue:
        node = queue.popleft()
        for ch, child in node.goto.items():
            fail = node.fail
            while fail is not None and ch not in fail.goto:
                fail = fail.fail
            child.fail = fail.goto[ch] if fail is not None else root
            child.outputs.extend(child.fail.outputs)
            queue.append(child)
    return root


@dataclass
class Lexicon:
    specs: list[PatternSpec]
    topic_index: dict[str, list[int]]
    version_hash: str
    _root: _AcNode = field(repr=False, compare=False, default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self._root is None:
            self._root = _build_automaton(self.specs)

    @property
    def term_count(self) -> int:
        return len(self.specs)


def _read_csv_source(path: Path) -> Iterator[dict]:
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "topic" not in reader.fieldnames or "term" not in reader.fieldnames:
            raise DataError(f"{path}: lexicon CSV must have 'topic' and 'term' columns")
        yield from reader


def _read_toml_source(path: Path) -> Iterator[dict]:
    try:
        import tomllib  # type: ignore[import-not-found]
    except ModuleNotFoundError:
        import tomli as tomllib  # type: ignore[no-redef]
    with path.open("rb") as fh:
        data = tomllib.load(fh)
    terms = data.get("terms")
    if not isinstance(terms, list):
        raise DataError(f"{path}: lexicon TOML must contain a [[terms]] array")
    yield from terms


def compile_lexicon(source: str | Path) -> Lexicon:
    """Compile a lexicon source file (CSV or TOML) into a matcher.

    Validates topics against the 17 canonical labels, normalizes each term per
    the dialect, and deduplicates identical (normalized, topic) pairs keeping
    the first occurrence.
    """
    path = Path(source)
    rows = _read_toml_source(path) if path.suffix.lower() == ".toml" else _read_csv_source(path)

    specs: list[PatternSpec] = []
    seen: set[tuple[str, str]] = set()
    topic_index: dict[str, list[int]] = {t: [] for t in ASPECTS}
    for row in rows:
        topic = str(row.get("topic", "")).strip()
        raw = str(row.get("term", ""))
        if topic not in topic_index:
            raise DataError(f"unknown topic {topic!r} for term {raw!r}")
        if not raw.strip():
            raise DataError(f"empty term under topic {topic!r}")
        kind, core = normalize_term(raw)
        key = (core, topic)
        if key in seen:
            continue
        seen.add(key)
        case_sensitive = str(row.get("case_sensitive") or "").strip().lower() in ("true", "1", "yes")
        variant_of = str(row.get("variant_of") or "").strip() or None
        spec = PatternSpec(
            spec_id=len(specs),
            raw=raw,
            kind=kind,
            normalized=core,
            topic=topic,
            case_sensitive=case_sensitive,
            variant_of=variant_of,
        )
        specs.append(spec)
        topic_index[topic].append(spec.spec_id)

    missing = [t for t in ASPECTS if not topic_index[t]]
    if missing:
        raise DataError(f"lexicon source missing topics: {', '.join(missing)}")

    digest = hashlib.sha256()
    for s in specs:
        digest.update(
            f"{s.topic}\x1f{s.raw}\x1f{s.kind}\x1f{s.normalized}\x1f{int(s.case_sensitive)}\x1f{s.variant_of or ''}\n".encode()
        )
    return Lexicon(specs=specs, topic_index=topic_index, version_hash=digest.hexdigest())


def _normalize_sentence(text: str) -> tuple[str, str, list[int], list[int]]:
    """Squash whitespace runs to single spaces, keeping a map back to original offsets.

    Returns (exact, folded, starts, ends) where normalized char i covers
    original span [starts[i], ends[i]).
    """
    exact: list[str] = []
    folded: list[str] = []
    starts: list[int] = []
    ends: list[int] = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            j = i
            while j < n and text[j].isspace():
                j += 1
            exact.append(" ")
            folded.append(" ")
            starts.append(i)
            ends.append(j)
            i = j
        else:
            exact.append(c)
            folded.append(_fold_char(c))
            starts.append(i)
            ends.append(i + 1)
            i += 1
    return "".join(exact), "".join(folded), starts, ends


def match_text(lexicon: Lexicon, text: str) -> list[tuple[int, int, int]]:
    """All (spec_id, start, end) matches in original-text offsets, including overlaps."""
    exact, folded, starts, ends = _normalize_sentence(text)
    n = len(folded)
    found: list[tuple[int, int, int]] = []
    node = lexicon._root
    for pos, ch in enumerate(folded):
        while node is not lexicon._root and ch not in node.goto:
            node = node.fail  # type: ignore[assignment]
        node = node.goto.get(ch, lexicon._root)
        for core_len, spec_id in node.outputs:
            s = pos + 1 - core_len
            if s > 0 and exact[s - 1] in WORD_CHARS:
                continue
            spec = lexicon.specs[spec_id]
            if spec.case_sensitive and exact[s : pos + 1] != spec.normalized:
                continue
            e = pos + 1
            if spec.kind == KIND_WILDCARD:
                letters = _ASCII_LOWER if spec.case_sensitive else _ASCII_LETTERS
                while e < n and exact[e] in letters:
                    e += 1
            elif e < n and exact[e] in WORD_CHARS:
                continue
            found.append((spec_id, starts[s], ends[e - 1]))
    found.sort(key=lambda t: (t[1], t[0]))
    return found


def match_sentence(lexicon: Lexicon, sentence: Sentence) -> list[Hit]:
    """All hits in a sentence, ordered by (span start, spec id)."""
    hits = []
    for spec_id, start, end in match_text(lexicon, sentence.text):
        spec = lexicon.specs[spec_id]
        hits.append(
            Hit(
                transcript_id=sentence.transcript_id,
                sentence_index=sentence.index,
                spec_id=spec_id,
                topic=spec.topic,
                term=spec.raw,
                start=start,
                end=end,
            )
        )
    return hits


@dataclass(frozen=True)
class FilterResult:
    hits: list[Hit]
    density: float
    sentence_count: int
    matched_sentence_count: int


def filter_corpus(lexicon: Lexicon, sentences: Iterable[Sentence]) -> FilterResult:
    """Match every sentence; density = distinct matched sentences / all sentences."""
    hits: list[Hit] = []
    matched: set[tuple[str, int]] = set()
    total = 0
    for sentence in sentences:
        total += 1
        sentence_hits = match_sentence(lexicon, sentence)
        if sentence_hits:
            matched.add((sentence.transcript_id, sentence.index))
            hits.extend(sentence_hits)
    density = len(matched) / total if total else 0.0
    return FilterResult(hits, density, total, len(matched))
