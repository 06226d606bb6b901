"""Argument corpus data model and JSONL/CSV ingestion.

Two corpus kinds are supported: ``quality`` (continuous score in [0, 1],
the ratio of positive crowd judgments) and ``persuasion`` (binary delta
label). A corpus is immutable after loading and safe to share across
workers.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import CorpusFormatError, DuplicateIdError, InputError

CORPUS_KINDS = ("quality", "persuasion")


@dataclass(frozen=True)
class StrengthLabel:
    """Dependent variable of one argument: a quality score or a delta."""

    kind: str
    quality_score: float | None = None
    delta: int | None = None

    def __post_init__(self):
        if self.kind == "quality":
            if self.quality_score is None:
                raise ValueError("quality label requires quality_score")
            if not 0.0 <= self.quality_score <= 1.0:
                raise ValueError(
                    f"quality_score {self.quality_score} outside [0, 1]"
                )
            if self.delta is not None:
                raise ValueError("quality label must not carry a delta")
        elif self.kind == "persuasion":
            if self.delta not in (0, 1):
                raise ValueError(f"delta must be 0 or 1, got {self.delta}")
            if self.quality_score is not None:
                raise ValueError("persuasion label must not carry a score")
        else:
            raise ValueError(f"unknown label kind: {self.kind!r}")

    @property
    def value(self) -> float:
        """Numeric DV value used by regression."""
        if self.kind == "quality":
            return float(self.quality_score)
        return float(self.delta)


@dataclass(frozen=True)
class Argument:
    """One corpus instance."""

    id: str
    text: str
    strength: StrengthLabel
    topic: str | None = None
    stance: str | None = None
    pair_id: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("argument id must be non-empty")
        if not self.text:
            raise ValueError(f"argument {self.id!r} has empty text")


@dataclass(frozen=True)
class Corpus:
    name: str
    kind: str
    arguments: tuple[Argument, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in CORPUS_KINDS:
            raise ValueError(f"unknown corpus kind: {self.kind!r}")
        if not self.arguments:
            raise ValueError("corpus must contain at least one argument")
        seen = set()
        for arg in self.arguments:
            if arg.strength.kind != self.kind:
                raise ValueError(
                    f"argument {arg.id!r} label kind {arg.strength.kind!r} "
                    f"does not match corpus kind {self.kind!r}"
                )
            if arg.id in seen:
                raise DuplicateIdError(arg.id)
            seen.add(arg.id)

    def __len__(self):
        return len(self.arguments)

    def __iter__(self):
        return iter(self.arguments)

    def ids(self) -> list[str]:
        return [a.id for a in self.arguments]

    def dv_vector(self) -> list[float]:
        return [a.strength.value for a in self.arguments]


def _label_from_record(record: dict, kind: str, line: int) -> StrengthLabel:
    if kind == "quality":
        if "score" not in record or record["score"] in (None, ""):
            raise CorpusFormatError("missing score", line=line, field="score")
        try:
            score = float(record["score"])
        except (TypeError, ValueError):
            raise CorpusFormatError(
                f"score {record['score']!r} is not a number", line=line, field="score"
            ) from None
        if not 0.0 <= score <= 1.0:
            raise CorpusFormatError(
                f"score {score} outside [0, 1]", line=line, field="score"
            )
        return StrengthLabel(kind="quality", quality_score=score)
    if "delta" not in record or record["delta"] in (None, ""):
        raise CorpusFormatError("missing delta", line=line, field="delta")
    raw = record["delta"]
    try:
        delta = int(raw)
    except (TypeError, ValueError):
        raise CorpusFormatError(
            f"delta {raw!r} is not an integer", line=line, field="delta"
        ) from None
    if delta not in (0, 1):
        raise CorpusFormatError(f"delta must be 0 or 1, got {delta}", line=line, field="delta")
    return StrengthLabel(kind="persuasion", delta=delta)


def _argument_from_record(record: dict, kind: str, line: int) -> Argument:
    if not isinstance(record, dict):
        raise CorpusFormatError("record is not an object", line=line)
    arg_id = record.get("id")
    if not arg_id or not isinstance(arg_id, str):
        raise CorpusFormatError("missing or non-string id", line=line, field="id")
    text = record.get("text")
    if not text or not isinstance(text, str):
        raise CorpusFormatError("missing or empty text", line=line, field="text")
    label = _label_from_record(record, kind, line)
    opt = {
        k: record[k]
        for k in ("topic", "stance", "pair_id")
        if record.get(k) not in (None, "")
    }
    return Argument(id=arg_id, text=text, strength=label, **opt)


def load_corpus(path: str | Path, kind: str, format: str | None = None) -> Corpus:
    """Load a corpus from a JSONL or CSV file.

    The format is inferred from the suffix unless given explicitly.
    Order is preserved; duplicate ids and out-of-range labels are
    rejected with the offending line named.
    """
    path = Path(path)
    if kind not in CORPUS_KINDS:
        raise InputError(f"unknown corpus kind: {kind!r}")
    if not path.exists():
        raise InputError(f"corpus file not found: {path}")
    if format is None:
        format = "csv" if path.suffix.lower() == ".csv" else "jsonl"
    if format == "jsonl":
        arguments = _load_jsonl(path, kind)
    elif format == "csv":
        arguments = _load_csv(path, kind)
    else:
        raise InputError(f"unknown corpus format: {format!r}")
    if not arguments:
        raise InputError(f"corpus file {path} contains no records")
    _check_duplicates(arguments)
    return Corpus(name=path.stem, kind=kind, arguments=tuple(arguments))


def _check_duplicates(arguments):
    seen = set()
    for arg in arguments:
        if arg.id in seen:
            raise DuplicateIdError(arg.id)
        seen.add(arg.id)


def _load_jsonl(path: Path, kind: str) -> list[Argument]:
    arguments = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"invalid JSON ({exc.msg})", line=line_no) from None
            try:
                arguments.append(_argument_from_record(record, kind, line_no))
            except ValueError as exc:
                raise CorpusFormatError(str(exc), line=line_no) from None
    return arguments


def _load_csv(path: Path, kind: str) -> list[Argument]:
    arguments = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise CorpusFormatError("missing CSV header", line=1)
        required = {"id", "text", "score" if kind == "quality" else "delta"}
        missing = required - set(reader.fieldnames)
        if missing:
            raise CorpusFormatError(
                f"header lacks required columns: {sorted(missing)}", line=1
            )
        for record in reader:
            line_no = reader.line_num
            try:
                arguments.append(_argument_from_record(record, kind, line_no))
            except ValueError as exc:
                raise CorpusFormatError(str(exc), line=line_no) from None
    return arguments


def save_corpus(corpus: Corpus, path: str | Path, format: str | None = None) -> None:
    """Serialize a corpus back to JSONL (default) or CSV."""
    path = Path(path)
    if format is None:
        format = "csv" if path.suffix.lower() == ".csv" else "jsonl"
    if format == "jsonl":
        with open(path, "w", encoding="utf-8") as fh:
            for arg in corpus:
                fh.write(json.dumps(_record_from_argument(arg, corpus.kind),
                                    ensure_ascii=False) + "\n")
    elif format == "csv":
        value_col = "score" if corpus.kind == "quality" else "delta"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["id", "text", value_col, "topic", "stance", "pair_id"])
            for arg in corpus:
                record = _record_from_argument(arg, corpus.kind)
                writer.writerow([
                    record["id"], record["text"], record[value_col],
                    record.get("topic", ""), record.get("stance", ""),
                    record.get("pair_id", ""),
                ])
    else:
        raise InputError(f"unknown corpus format: {format!r}")


def _record_from_argument(arg: Argument, kind: str) -> dict:
    record = {"id": arg.id, "text": arg.text}
    if kind == "quality":
        record["score"] = arg.strength.quality_score
    else:
        record["delta"] = arg.strength.delta
    for key in ("topic", "stance", "pair_id"):
        value = getattr(arg, key)
        if value is not None:
            record[key] = value
    return record


def corpus_summary(corpus: Corpus) -> dict:
    """Counts and DV statistics for a loaded corpus."""
    values = corpus.dv_vector()
    return {
        "name": corpus.name,
        "kind": corpus.kind,
        "n": len(corpus),
        "dv_mean": sum(values) / len(values),
        "dv_min": min(values),
        "dv_max": max(values),
    }
