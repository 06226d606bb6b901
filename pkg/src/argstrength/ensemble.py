"""Aggregation of per-model classifier probabilities into features.

Each feature (storytelling, one emotion) comes as k prediction sets,
one per ensemble model, holding a probability per argument. Long
instances may instead carry probabilities for two halves; those are
combined per model (mean probability, OR of the half votes) before the
cross-model majority vote. The aggregated probability is the plain
mean over models and serves as the regression input; the binary label
only feeds the distribution table.
"""
from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Corpus
from .errors import CoverageError, InputError

SEGMENTS = ("whole", "first_half", "second_half")


@dataclass(frozen=True)
class PredictionSet:
    """Probabilities of one model for one feature and segment."""

    feature: str
    model_id: str
    rows: dict[str, float]
    segment: str = "whole"

    def __post_init__(self):
        if self.segment not in SEGMENTS:
            raise InputError(f"unknown segment {self.segment!r}")
        for arg_id, prob in self.rows.items():
            if not 0.0 <= prob <= 1.0:
                raise InputError(
                    f"probability {prob} for id {arg_id!r} outside [0, 1]")


@dataclass(frozen=True)
class AggregatedRow:
    label: int
    probability: float
    votes: int
    k: int
    tie: bool = False


@dataclass(frozen=True)
class AggregatedFeature:
    feature: str
    rows: dict[str, AggregatedRow] = field(default_factory=dict)

    def ids(self):
        return self.rows.keys()


def aggregate_ensemble(
    predictions: list[PredictionSet],
    threshold: float = 0.5,
    half_probability: str = "mean",
) -> AggregatedFeature:
    """Majority vote and mean probability across one feature's models.

    Per model, a whole-instance vote is 1 iff probability >= threshold;
    a half-split instance votes 1 iff either half clears the threshold
    and contributes the mean (or, with ``half_probability="max"``, the
    max) of the two halves. An exact vote tie labels 0 and is flagged.
    """
    if not predictions:
        raise InputError("no prediction sets given")
    feature = predictions[0].feature
    if any(p.feature != feature for p in predictions):
        raise InputError("prediction sets mix features")
    if half_probability not in ("mean", "max"):
        raise InputError(f"unknown half_probability mode {half_probability!r}")

    by_model: dict[str, dict[str, dict[str, float]]] = {}
    for pset in predictions:
        segments = by_model.setdefault(pset.model_id, {})
        if pset.segment in segments:
            raise InputError(
                f"duplicate segment {pset.segment!r} for model {pset.model_id!r}")
        segments[pset.segment] = pset.rows

    # Per model, reduce segments to one (probability, vote) per id.
    per_model: dict[str, dict[str, tuple[float, int]]] = {}
    for model_id, segments in by_model.items():
        whole = segments.get("whole", {})
        first = segments.get("first_half", {})
        second = segments.get("second_half", {})
        half_ids = set(first) | set(second)
        incomplete = (set(first) ^ set(second)) | (half_ids & set(whole))
        if incomplete:
            raise CoverageError(
                f"model {model_id!r} has inconsistent segment coverage",
                missing_ids=incomplete)
        reduced = {}
        for arg_id, prob in whole.items():
            reduced[arg_id] = (prob, int(prob >= threshold))
        for arg_id in half_ids:
            pair = (first[arg_id], second[arg_id])
            prob = max(pair) if half_probability == "max" else sum(pair) / 2.0
            vote = int(pair[0] >= threshold or pair[1] >= threshold)
            reduced[arg_id] = (prob, vote)
        per_model[model_id] = reduced

    model_ids = sorted(per_model)
    k = len(model_ids)
    covered = set(per_model[model_ids[0]])
    for model_id in model_ids[1:]:
        if set(per_model[model_id]) != covered:
            raise CoverageError(
                f"model {model_id!r} does not cover the same ids as "
                f"{model_ids[0]!r}",
                missing_ids=covered ^ set(per_model[model_id]))

    rows = {}
    for arg_id in covered:
        probs = [per_model[m][arg_id][0] for m in model_ids]
        votes = sum(per_model[m][arg_id][1] for m in model_ids)
        tie = k % 2 == 0 and votes * 2 == k
        rows[arg_id] = AggregatedRow(
            label=int(votes * 2 > k),
            probability=sum(probs) / k,
            votes=votes,
            k=k,
            tie=tie,
        )
    return AggregatedFeature(feature=feature, rows=rows)


def feature_distribution(
    features: list[AggregatedFeature], corpus: Corpus
) -> list[dict]:
    """Positive count, positive ratio in percent, and mean probability
    per feature over a corpus."""
    ids = corpus.ids()
    table = []
    for agg in features:
        missing = [i for i in ids if i not in agg.rows]
        if missing:
            raise CoverageError(
                f"feature {agg.feature!r} does not cover the corpus",
                missing_ids=missing)
        positives = sum(agg.rows[i].label for i in ids)
        mean_prob = sum(agg.rows[i].probability for i in ids) / len(ids)
        table.append({
            "feature": agg.feature,
            "positives": positives,
            "pct": 100.0 * positives / len(ids),
            "mean_probability": mean_prob,
        })
    return table


# ---------------------------------------------------------------------------
# File interfaces
# ---------------------------------------------------------------------------

_NAME_RE = re.compile(
    r"(?P<feature>[^.]+)\.(?P<model>[^.]+?)(?:\.(?P<segment>first_half|second_half))?\.csv$"
)


def read_prediction_csv(
    path: str | Path,
    feature: str | None = None,
    model_id: str | None = None,
    segment: str | None = None,
) -> list[PredictionSet]:
    """Read one prediction CSV (columns: id, probability[, segment]).

    Feature, model and default segment come from the filename
    ``<feature>.<model_id>[.<segment>].csv`` unless given explicitly; a
    segment column overrides the default per row.
    """
    path = Path(path)
    if not path.exists():
        raise InputError(f"prediction file not found: {path}")
    match = _NAME_RE.match(path.name)
    if feature is None or model_id is None:
        if match is None:
            raise InputError(
                f"cannot infer feature/model from filename {path.name!r}")
        feature = feature or match.group("feature")
        model_id = model_id or match.group("model")
        segment = segment or match.group("segment")
    segment = segment or "whole"

    rows: dict[str, dict[str, float]] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"id", "probability"} <= set(reader.fieldnames):
            raise InputError(f"{path}: header must include id and probability")
        for record in reader:
            line = reader.line_num
            arg_id = record["id"]
            try:
                prob = float(record["probability"])
            except (TypeError, ValueError):
                raise InputError(
                    f"{path}:{line}: probability {record['probability']!r} "
                    "is not a number") from None
            row_segment = record.get("segment") or segment
            bucket = rows.setdefault(row_segment, {})
            if arg_id in bucket:
                raise InputError(
                    f"{path}:{line}: duplicate id {arg_id!r} in segment "
                    f"{row_segment!r}")
            bucket[arg_id] = prob
    return [
        PredictionSet(feature=feature, model_id=model_id, rows=seg_rows, segment=seg)
        for seg, seg_rows in sorted(rows.items())
    ]


def read_prediction_dir(directory: str | Path) -> dict[str, list[PredictionSet]]:
    """Load every ``<feature>.<model_id>[.<segment>].csv`` in a
    directory, grouped by feature."""
    directory = Path(directory)
    if not directory.is_dir():
        raise InputError(f"prediction directory not found: {directory}")
    grouped: dict[str, list[PredictionSet]] = {}
    found = False
    for path in sorted(directory.glob("*.csv")):
        found = True
        for pset in read_prediction_csv(path):
            grouped.setdefault(pset.feature, []).append(pset)
    if not found:
        raise InputError(f"no prediction CSVs in {directory}")
    return grouped


def write_aggregated(features: list[AggregatedFeature], path: str | Path) -> None:
    """Emit aggregated features as JSONL, one line per (feature, id)."""
    with open(path, "w", encoding="utf-8") as fh:
        for agg in features:
            for arg_id in sorted(agg.rows):
                row = agg.rows[arg_id]
                record = {
                    "feature": agg.feature,
                    "id": arg_id,
                    "label": row.label,
                    "probability": row.probability,
                    "votes": row.votes,
                    "k": row.k,
                }
                if row.tie:
                    record["tie"] = True
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def read_aggregated(path: str | Path) -> list[AggregatedFeature]:
    """Read back JSONL written by :func:`write_aggregated`."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"aggregated feature file not found: {path}")
    grouped: dict[str, dict[str, AggregatedRow]] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                row = AggregatedRow(
                    label=int(record["label"]),
                    probability=float(record["probability"]),
                    votes=int(record.get("votes", 0)),
                    k=int(record.get("k", 0)),
                    tie=bool(record.get("tie", False)),
                )
                grouped.setdefault(record["feature"], {})[record["id"]] = row
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise InputError(
                    f"{path}:{line_no}: bad aggregated record ({exc})") from None
    return [
        AggregatedFeature(feature=feature, rows=rows)
        for feature, rows in sorted(grouped.items())
    ]
