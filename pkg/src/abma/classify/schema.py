"""Labeled-data and prediction record types plus their JSONL wire formats.

Labeled JSONL, one object per line:
    {"doc_id": ..., "text": ..., "aspects": [...], "maturity": 1..4}
    {"doc_id": ..., "text": ..., "negative": true}
Negatives carry no aspects or maturity; they feed the aspect heads as
all-negative rows.

Prediction JSONL (the contract shared with external predictors):
    {"doc_id": ..., "aspects": [{"label": ..., "score": ...}],
     "maturity": {"plan": p1, "pilot": p2, "release": p3, "pioneer": p4},
     "source": "baseline" | "imported"}
Aspect scores lie in [0, 1]; the maturity distribution sums to 1 (±1e-6).
Export is byte-stable: re-exporting imported predictions reproduces the file.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence, Union

from ..errors import DataError
from ..labels import ASPECTS, MATURITY_KEYS, Maturity

DISTRIBUTION_TOLERANCE = 1e-6


@dataclass(frozen=True)
class LabeledExample:
    doc_id: str
    text: str
    aspects: frozenset[str]
    maturity: Maturity

    def __post_init__(self) -> None:
        if not self.aspects:
            raise DataError(f"labeled example {self.doc_id} has no aspects")
        unknown = self.aspects - set(ASPECTS)
        if unknown:
            raise DataError(f"unknown label(s) {sorted(unknown)} in {self.doc_id}")


@dataclass(frozen=True)
class NegativeExample:
    doc_id: str
    text: str


TrainingRecord = Union[LabeledExample, NegativeExample]


@dataclass(frozen=True)
class Prediction:
    doc_id: str
    aspects: dict[str, float]  # predicted labels with scores in [0, 1]
    maturity_scores: dict[str, float]  # keys = MATURITY_KEYS, sums to 1
    source: str

    @property
    def maturity(self) -> Maturity:
        best = max(MATURITY_KEYS, key=lambda k: (self.maturity_scores[k], -MATURITY_KEYS.index(k)))
        return Maturity(MATURITY_KEYS.index(best) + 1)

    def validate(self, line: str = "") -> None:
        where = f"{line}: " if line else ""
        for label, score in self.aspects.items():
            if label not in ASPECTS:
                raise DataError(f"{where}unknown label {label!r}")
            if not 0.0 <= score <= 1.0:
                raise DataError(f"{where}aspect score out of [0,1]: {label}={score}")
        if set(self.maturity_scores) != set(MATURITY_KEYS):
            raise DataError(f"{where}maturity distribution must have keys {MATURITY_KEYS}")
        total = sum(self.maturity_scores[k] for k in MATURITY_KEYS)
        if abs(total - 1.0) > DISTRIBUTION_TOLERANCE:
            raise DataError(f"{where}maturity distribution sums to {total}, expected 1")


def load_labeled(path: str | Path) -> list[TrainingRecord]:
    records: list[TrainingRecord] = []
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}:{lineno}: invalid JSON: {exc}") from None
            try:
                records.append(_parse_labeled(obj))
            except DataError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
    return records


def _parse_labeled(obj: dict) -> TrainingRecord:
    doc_id = str(obj.get("doc_id", "")).strip()
    if not doc_id:
        raise DataError("missing doc_id")
    text = obj.get("text")
    if not isinstance(text, str) or not text.strip():
        raise DataError(f"missing text for {doc_id}")
    if obj.get("negative"):
        return NegativeExample(doc_id, text)
    aspects = obj.get("aspects")
    if not isinstance(aspects, list):
        raise DataError(f"missing aspects for {doc_id}")
    maturity = obj.get("maturity")
    if maturity not in (1, 2, 3, 4):
        raise DataError(f"maturity must be 1..4 for {doc_id}, got {maturity!r}")
    return LabeledExample(doc_id, text, frozenset(str(a) for a in aspects), Maturity(maturity))


def write_labeled(records: Iterable[TrainingRecord], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for r in records:
            if isinstance(r, NegativeExample):
                obj = {"doc_id": r.doc_id, "text": r.text, "negative": True}
            else:
                obj = {
                    "doc_id": r.doc_id,
                    "text": r.text,
                    "aspects": sorted(r.aspects),
                    "maturity": int(r.maturity),
                }
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def prediction_to_obj(p: Prediction) -> dict:
    return {
        "doc_id": p.doc_id,
        "aspects": [
            {"label": label, "score": p.aspects[label]} for label in sorted(p.aspects)
        ],
        "maturity": {k: p.maturity_scores[k] for k in MATURITY_KEYS},
        "source": p.source,
    }


def write_predictions(predictions: Iterable[Prediction], path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8") as fh:
        for p in predictions:
            fh.write(json.dumps(prediction_to_obj(p), ensure_ascii=False) + "\n")


def read_predictions(
    path: str | Path,
    known_doc_ids: set[str] | None = None,
    source: str | None = None,
) -> list[Prediction]:
    """Read and strictly validate a prediction JSONL file.

    When ``known_doc_ids`` is given every record must reference one of them;
    ``source`` overrides the records' source tag (import sets "imported").
    """
    predictions: list[Prediction] = []
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            where = f"{path}:{lineno}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{where}: invalid JSON: {exc}") from None
            doc_id = str(obj.get("doc_id", "")).strip()
            if not doc_id:
                raise DataError(f"{where}: missing doc_id")
            if known_doc_ids is not None and doc_id not in known_doc_ids:
                raise DataError(f"{where}: unknown doc_id {doc_id!r}")
            aspects_raw = obj.get("aspects")
            if not isinstance(aspects_raw, list):
                raise DataError(f"{where}: aspects must be a list")
            aspects: dict[str, float] = {}
            for item in aspects_raw:
                if not isinstance(item, dict) or "label" not in item or "score" not in item:
                    raise DataError(f"{where}: aspect entries need label and score")
                aspects[str(item["label"])] = float(item["score"])
            maturity_raw = obj.get("maturity")
            if not isinstance(maturity_raw, dict):
                raise DataError(f"{where}: maturity must be a score distribution")
            scores = {k: float(maturity_raw.get(k, float("nan"))) for k in MATURITY_KEYS}
            p = Prediction(
                doc_id=doc_id,
                aspects=aspects,
                maturity_scores=scores,
                source=source or str(obj.get("source", "imported")),
            )
            p.validate(line=where)
            predictions.append(p)
    return predictions


@dataclass(frozen=True)
class SplitResult:
    train: list[TrainingRecord]
    validation: list[TrainingRecord]
    test: list[TrainingRecord]
    warnings: list[str] = field(default_factory=list)


def _stratum(record: TrainingRecord) -> str:
    if isinstance(record, NegativeExample):
        return "negative"
    return str(int(record.maturity))


def split_dataset(records: Sequence[TrainingRecord], seed: int) -> SplitResult:
    """Deterministic 80/10/10 split: test = validation = floor(n/10).

    Stratified by maturity class (negatives form their own stratum) via
    largest-remainder allocation; falls back to an unstratified shuffle with a
    warning when there are fewer records than strata.
    """
    n = len(records)
    if n < 10:
        raise DataError(f"need at least 10 examples to split, got {n}")
    n_test = n // 10
    n_val = n // 10

    rng = random.Random(seed)
    warnings: list[str] = []
    strata: dict[str, list[int]] = {}
    for i, r in enumerate(records):
        strata.setdefault(_stratum(r), []).append(i)

    if n < len(strata):
        warnings.append("unstratified split: fewer examples than strata")
        order = list(range(n))
        rng.shuffle(order)
        test_idx = set(order[:n_test])
        val_idx = set(order[n_test : n_test + n_val])
    else:
        for key in sorted(strata):
            rng.shuffle(strata[key])
        offsets = {key: 0 for key in strata}
        test_idx = set(_take_stratified(strata, offsets, n_test, n))
        val_idx = set(_take_stratified(strata, offsets, n_val, n - n_test))

    train, validation, test = [], [], []
    for i, r in enumerate(records):
        if i in test_idx:
            test.append(r)
        elif i in val_idx:
            validation.append(r)
        else:
            train.append(r)
    return SplitResult(train, validation, test, warnings)


def _take_stratified(
    strata: dict[str, list[int]], offsets: dict[str, int], quota: int, remaining_total: int
) -> list[int]:
    """Draw ``quota`` indices across strata proportionally (largest remainder)."""
    remaining = {k: len(v) - offsets[k] for k, v in strata.items()}
    shares = {k: quota * remaining[k] / remaining_total for k in strata} if remaining_total else {}
    counts = {k: min(int(shares.get(k, 0)), remaining[k]) for k in strata}
    leftover = quota - sum(counts.values())
    by_remainder = sorted(
        strata,
        key=lambda k: (-(shares.get(k, 0) - int(shares.get(k, 0))), k),
    )
    while leftover > 0:
        progressed = False
        for k in by_remainder:
            if leftover == 0:
                break
            if counts[k] < remaining[k]:
                counts[k] += 1
                leftover -= 1
                progressed = True
        if not progressed:
            break
    taken: list[int] = []
    for k in sorted(strata):
        start = offsets[k]
        taken.extend(strata[k][start : start + counts[k]])
        offsets[k] += counts[k]
    return taken
