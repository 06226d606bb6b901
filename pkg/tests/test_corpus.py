import json

import pytest
from hypothesis import given, strategies as st

from argstrength.corpus import (
    Argument,
    Corpus,
    StrengthLabel,
    corpus_summary,
    load_corpus,
    save_corpus,
)
from argstrength.errors import CorpusFormatError, DuplicateIdError, InputError


def test_load_minimal_jsonl(jsonl_corpus_file):
    path = jsonl_corpus_file([{"id": "a1", "text": "x", "score": 0.6}])
    corpus = load_corpus(path, kind="quality")
    assert len(corpus) == 1
    assert corpus.kind == "quality"
    assert corpus.arguments[0].strength.quality_score == 0.6


def test_score_out_of_range_rejected(jsonl_corpus_file):
    path = jsonl_corpus_file([{"id": "a1", "text": "x", "score": 1.3}])
    with pytest.raises(CorpusFormatError, match=r"\[0, 1\]"):
        load_corpus(path, kind="quality")


def test_duplicate_id_rejected(jsonl_corpus_file):
    path = jsonl_corpus_file([
        {"id": "a1", "text": "x", "score": 0.5},
        {"id": "a1", "text": "y", "score": 0.7},
    ])
    with pytest.raises(DuplicateIdError, match="a1"):
        load_corpus(path, kind="quality")


def test_malformed_record_names_line_and_field(jsonl_corpus_file):
    path = jsonl_corpus_file([
        {"id": "a1", "text": "x", "score": 0.5},
        {"id": "a2", "score": 0.5},
    ])
    with pytest.raises(CorpusFormatError) as excinfo:
        load_corpus(path, kind="quality")
    assert "line 2" in str(excinfo.value)
    assert "text" in str(excinfo.value)


def test_delta_must_be_binary(jsonl_corpus_file):
    path = jsonl_corpus_file([{"id": "a1", "text": "x", "delta": 2}])
    with pytest.raises(CorpusFormatError, match="delta"):
        load_corpus(path, kind="persuasion")


def test_missing_file():
    with pytest.raises(InputError, match="not found"):
        load_corpus("/nonexistent/corpus.jsonl", kind="quality")


def test_empty_file_rejected(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    with pytest.raises(InputError, match="no records"):
        load_corpus(path, kind="quality")


def test_order_preserved(jsonl_corpus_file):
    records = [{"id": f"a{i}", "text": "t", "score": i / 10} for i in range(10)]
    corpus = load_corpus(jsonl_corpus_file(records), kind="quality")
    assert corpus.ids() == [f"a{i}" for i in range(10)]


def test_csv_with_quoted_newlines(tmp_path):
    path = tmp_path / "corpus.csv"
    path.write_text(
        'id,text,delta,pair_id\n'
        'c1,"first line\nsecond, with comma",1,pair9\n'
        'c2,plain,0,pair9\n',
        encoding="utf-8",
    )
    corpus = load_corpus(path, kind="persuasion")
    assert corpus.arguments[0].text == "first line\nsecond, with comma"
    assert corpus.arguments[0].pair_id == "pair9"
    assert corpus.arguments[1].strength.delta == 0


def test_csv_missing_column(tmp_path):
    path = tmp_path / "corpus.csv"
    path.write_text("id,text\nc1,hello\n")
    with pytest.raises(CorpusFormatError, match="score"):
        load_corpus(path, kind="quality")


def test_summary_mean():
    corpus = Corpus(name="s", kind="quality", arguments=tuple(
        Argument(id=f"a{i}", text="t",
                 strength=StrengthLabel(kind="quality", quality_score=s))
        for i, s in enumerate([0.0, 0.5, 1.0])
    ))
    summary = corpus_summary(corpus)
    assert summary["n"] == 3
    assert summary["dv_mean"] == pytest.approx(0.5)
    assert summary["dv_min"] == 0.0
    assert summary["dv_max"] == 1.0


def test_summary_balanced_persuasion(persuasion_corpus):
    summary = corpus_summary(persuasion_corpus)
    assert summary["dv_mean"] == pytest.approx(0.5)


def test_summary_single_argument():
    corpus = Corpus(name="one", kind="quality", arguments=(
        Argument(id="a", text="t",
                 strength=StrengthLabel(kind="quality", quality_score=0.3)),
    ))
    summary = corpus_summary(corpus)
    assert summary["dv_min"] == summary["dv_max"] == summary["dv_mean"] == 0.3


def test_label_kind_mismatch_rejected():
    with pytest.raises(ValueError, match="kind"):
        Corpus(name="bad", kind="quality", arguments=(
            Argument(id="a", text="t",
                     strength=StrengthLabel(kind="persuasion", delta=1)),
        ))


_texts = st.text(
    st.characters(blacklist_categories=("Cs",)), min_size=1, max_size=80
).filter(lambda s: s.strip())


@given(
    st.lists(
        st.tuples(_texts, st.floats(min_value=0.0, max_value=1.0)),
        min_size=1, max_size=8,
    )
)
def test_jsonl_round_trip(records):
    corpus = Corpus(name="rt", kind="quality", arguments=tuple(
        Argument(id=f"id{i}", text=text,
                 strength=StrengthLabel(kind="quality", quality_score=score))
        for i, (text, score) in enumerate(records)
    ))
    import io

    buffer = io.StringIO()
    for arg in corpus:
        from argstrength.corpus import _record_from_argument

        buffer.write(json.dumps(_record_from_argument(arg, corpus.kind)) + "\n")
    reloaded = [json.loads(line) for line in buffer.getvalue().splitlines()]
    assert [r["text"] for r in reloaded] == [a.text for a in corpus]
    assert [r["score"] for r in reloaded] == [
        a.strength.quality_score for a in corpus
    ]


def test_save_then_load_identical(tmp_path, quality_corpus, persuasion_corpus):
    for corpus, fmt in (
        (quality_corpus, "jsonl"),
        (quality_corpus, "csv"),
        (persuasion_corpus, "jsonl"),
        (persuasion_corpus, "csv"),
    ):
        path = tmp_path / f"{corpus.kind}.{fmt}"
        save_corpus(corpus, path, format=fmt)
        reloaded = load_corpus(path, kind=corpus.kind, format=fmt)
        assert reloaded.ids() == corpus.ids()
        assert reloaded.dv_vector() == corpus.dv_vector()
        assert [a.text for a in reloaded] == [a.text for a in corpus]
