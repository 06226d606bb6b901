import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from argstrength.corpus import Argument, Corpus, StrengthLabel


def make_quality_corpus(scores, texts=None, name="tiny"):
    args = []
    for i, score in enumerate(scores):
        text = texts[i] if texts else f"Argument number {i} about the topic."
        args.append(Argument(
            id=f"q{i}", text=text,
            strength=StrengthLabel(kind="quality", quality_score=score)))
    return Corpus(name=name, kind="quality", arguments=tuple(args))


def make_persuasion_corpus(deltas, texts=None, name="tiny"):
    args = []
    for i, delta in enumerate(deltas):
        text = texts[i] if texts else f"Reply number {i} to the original post."
        args.append(Argument(
            id=f"p{i}", text=text,
            strength=StrengthLabel(kind="persuasion", delta=delta)))
    return Corpus(name=name, kind="persuasion", arguments=tuple(args))


@pytest.fixture
def quality_corpus():
    return make_quality_corpus([0.2, 0.5, 0.8, 1.0])


@pytest.fixture
def persuasion_corpus():
    return make_persuasion_corpus([0, 1, 1, 0])


@pytest.fixture
def jsonl_corpus_file(tmp_path):
    def write(records, name="corpus.jsonl"):
        path = tmp_path / name
        with open(path, "w", encoding="utf-8") as fh:
            for record in records:
                fh.write(json.dumps(record) + "\n")
        return path

    return write


@pytest.fixture
def prediction_dir(tmp_path):
    """Writes <feature>.<model>[.<segment>].csv files from nested dicts."""

    def write(files):
        directory = tmp_path / "predictions"
        directory.mkdir(exist_ok=True)
        for filename, rows in files.items():
            lines = ["id,probability"]
            for arg_id, prob in rows.items():
                lines.append(f"{arg_id},{prob}")
            (directory / filename).write_text("\n".join(lines) + "\n")
        return directory

    return write
