"""Instance-by-feature design matrix assembly.

Columns carry the averaged classification probabilities (storytelling
and emotions) and the six hedge variants; the DV column is the quality
score or the binary delta. Values go into regression on their raw
scales; no centering or standardization happens here.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Corpus
from .ensemble import AggregatedFeature
from .errors import CoverageError, InputError, UnknownFeatureError
from .hedging import HedgeAnnotation

EMOTION_FEATURES = (
    "anger", "boredom", "disgust", "fear", "guilt_shame", "joy",
    "pride", "relief", "sadness", "surprise", "trust",
)
HEDGE_COLUMNS = (
    "hedge_abs_first", "hedge_abs_final", "hedge_abs_all",
    "hedge_ratio_first", "hedge_ratio_final", "hedge_ratio_all",
)
# The default IV registry: storytelling, the nine emotions kept for
# regression (boredom and surprise stay out unless selected), and the
# six hedge variants.
DEFAULT_IVS = (
    "storytelling",
    "anger", "disgust", "fear", "guilt_shame", "joy",
    "pride", "relief", "sadness", "trust",
) + HEDGE_COLUMNS

_CANONICAL = {"guilt/shame": "guilt_shame", "guilt-shame": "guilt_shame"}


def canonical_feature_name(name: str) -> str:
    return _CANONICAL.get(name.strip().lower(), name.strip().lower())


@dataclass(frozen=True)
class TermSpec:
    """A regression term: one column, or a two-way interaction."""

    kind: str
    names: tuple[str, ...]

    def __post_init__(self):
        if self.kind not in ("main", "interaction"):
            raise ValueError(f"unknown term kind {self.kind!r}")
        if self.kind == "main" and len(self.names) != 1:
            raise ValueError("main term needs exactly one column name")
        if self.kind == "interaction" and (
            len(self.names) != 2 or self.names[0] == self.names[1]
        ):
            raise ValueError("interaction needs two distinct column names")

    @staticmethod
    def main(name: str) -> "TermSpec":
        return TermSpec("main", (name,))

    @staticmethod
    def interaction(a: str, b: str) -> "TermSpec":
        return TermSpec("interaction", (a, b))

    @property
    def label(self) -> str:
        return "*".join(self.names)

    @staticmethod
    def parse(text: str) -> "TermSpec":
        parts = [canonical_feature_name(p) for p in text.split("*")]
        if len(parts) == 1:
            return TermSpec.main(parts[0])
        if len(parts) == 2:
            return TermSpec.interaction(parts[0], parts[1])
        raise ValueError(f"cannot parse term {text!r}")


class FeatureTable:
    """Aligned IV columns and DV vector for one corpus."""

    def __init__(self, ids, columns, dv, dv_kind):
        self.ids: tuple[str, ...] = tuple(ids)
        if not self.ids:
            raise InputError("feature table needs at least one instance")
        self.columns: dict[str, np.ndarray] = {}
        for name, values in columns.items():
            values = np.asarray(values, dtype=float)
            if values.shape != (len(self.ids),):
                raise InputError(
                    f"column {name!r} has {values.shape[0]} values for "
                    f"{len(self.ids)} instances")
            if name in self.columns:
                raise InputError(f"duplicate column name {name!r}")
            self.columns[name] = values
        self.dv = np.asarray(dv, dtype=float)
        if self.dv.shape != (len(self.ids),):
            raise InputError("dv length does not match instance count")
        if dv_kind not in ("quality", "persuasion"):
            raise InputError(f"unknown dv kind {dv_kind!r}")
        self.dv_kind = dv_kind

    @property
    def n(self) -> int:
        return len(self.ids)

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise UnknownFeatureError(
                f"unknown column {name!r}; available: "
                + ", ".join(sorted(self.columns)))
        return self.columns[name]

    def term_values(self, term: TermSpec) -> np.ndarray:
        if term.kind == "main":
            return self.column(term.names[0])
        return self.column(term.names[0]) * self.column(term.names[1])


def build_feature_table(
    corpus: Corpus,
    aggregated: list[AggregatedFeature],
    hedges: list[HedgeAnnotation],
    iv_selection: list[str] | None = None,
) -> FeatureTable:
    """Assemble the design columns for a corpus.

    Probability features come from the aggregated ensembles (their
    mean classification probability, not the binary label); hedge
    columns from the hedge annotations. Any instance missing a
    selected feature is an error.
    """
    ids = corpus.ids()
    selection = [
        canonical_feature_name(name)
        for name in (iv_selection if iv_selection is not None else DEFAULT_IVS)
    ]
    if len(set(selection)) != len(selection):
        raise InputError("iv selection contains duplicates")

    prob_features = {
        canonical_feature_name(agg.feature): agg for agg in aggregated
    }
    hedge_by_id = {ann.argument_id: ann for ann in hedges}

    columns: dict[str, np.ndarray] = {}
    for name in selection:
        if name in HEDGE_COLUMNS:
            missing = [i for i in ids if i not in hedge_by_id]
            if missing:
                raise CoverageError(
                    "hedge annotations do not cover the corpus",
                    missing_ids=missing)
            attr = name.removeprefix("hedge_")
            columns[name] = np.array([
                getattr(hedge_by_id[i].features, attr) for i in ids
            ], dtype=float)
        elif name in prob_features:
            agg = prob_features[name]
            missing = [i for i in ids if i not in agg.rows]
            if missing:
                raise CoverageError(
                    f"feature {name!r} does not cover the corpus",
                    missing_ids=missing)
            columns[name] = np.array(
                [agg.rows[i].probability for i in ids], dtype=float)
        else:
            raise UnknownFeatureError(
                f"feature {name!r} is not available for this corpus; "
                "available: "
                + ", ".join(sorted(prob_features) + list(HEDGE_COLUMNS)))
    return FeatureTable(
        ids=ids, columns=columns, dv=corpus.dv_vector(), dv_kind=corpus.kind)


def materialize_terms(
    table: FeatureTable,
    terms: list[TermSpec],
    intercept: bool = True,
) -> tuple[np.ndarray, list[str]]:
    """Build the design matrix for the given terms.

    Interaction columns are elementwise products of the raw columns.
    Returns the matrix and its column labels, intercept first when
    requested.
    """
    labels = [t.label for t in terms]
    if len(set(labels)) != len(labels):
        raise InputError(f"duplicate terms in {labels}")
    parts = []
    names = []
    if intercept:
        parts.append(np.ones(table.n))
        names.append("intercept")
    for term in terms:
        parts.append(table.term_values(term))
        names.append(term.label)
    if not parts:
        raise InputError("no terms and no intercept requested")
    return np.column_stack(parts), names


# ---------------------------------------------------------------------------
# CSV interchange
# ---------------------------------------------------------------------------

def write_feature_table(table: FeatureTable, path: str | Path) -> None:
    """Export as CSV: id column, IV columns, then the DV column named
    after the corpus kind (score or delta)."""
    dv_name = "score" if table.dv_kind == "quality" else "delta"
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        names = list(table.columns)
        writer.writerow(["id", *names, dv_name])
        for row, arg_id in enumerate(table.ids):
            writer.writerow(
                [arg_id]
                + [repr(float(table.columns[c][row])) for c in names]
                + [repr(float(table.dv[row]))]
            )


def read_feature_table(path: str | Path) -> FeatureTable:
    """Load a CSV produced by :func:`write_feature_table`."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"feature table not found: {path}")
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty file") from None
        if len(header) < 2 or header[0] != "id" or header[-1] not in ("score", "delta"):
            raise InputError(
                f"{path}: header must be id,<columns...>,score|delta")
        dv_kind = "quality" if header[-1] == "score" else "persuasion"
        names = header[1:-1]
        ids = []
        data: list[list[float]] = []
        dv = []
        for row_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise InputError(f"{path}:{row_no}: wrong column count")
            ids.append(row[0])
            try:
                data.append([float(v) for v in row[1:-1]])
                dv.append(float(row[-1]))
            except ValueError as exc:
                raise InputError(f"{path}:{row_no}: {exc}") from None
    matrix = np.array(data, dtype=float) if data else np.empty((0, len(names)))
    columns = {name: matrix[:, j] for j, name in enumerate(names)}
    return FeatureTable(ids=ids, columns=columns, dv=dv, dv_kind=dv_kind)
