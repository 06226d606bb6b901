"""Hedge detection and the six per-argument hedge feature variants.

Matching is longest-match, left-to-right and non-overlapping over the
lowercased word tokens of each sentence (punctuation is invisible to
patterns). A matched multi-word pattern counts as one hedge. Matches
whose lexicon entry names a disambiguation rule are kept only if the
rule confirms the hedge reading; a rejected match still consumes its
span, keeping the scan deterministic.

Feature variants: absolute counts and hedge/word-token ratios for the
first sentence, the final sentence, and the whole argument.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, asdict
from pathlib import Path

from .corpus import Corpus
from .errors import InputError
from .lexicon import RULES, HedgeLexicon
from .parsing import ParsedDocument, parse_document, read_conllu

HEDGE_FEATURE_NAMES = (
    "abs_first", "abs_final", "abs_all",
    "ratio_first", "ratio_final", "ratio_all",
)


@dataclass(frozen=True)
class HedgeFeatures:
    abs_first: int
    abs_final: int
    abs_all: int
    ratio_first: float
    ratio_final: float
    ratio_all: float

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class HedgeAnnotation:
    """Matched hedge spans and the derived feature variants.

    ``matches`` holds (sentence index, token start, token end) triples
    with ends exclusive; ``word_counts`` the word-token counts of the
    (first, final, whole) scopes; ``flags`` names scopes whose ratio
    was forced to 0 for lack of word tokens.
    """

    argument_id: str
    matches: tuple[tuple[int, int, int], ...]
    features: HedgeFeatures
    word_counts: tuple[int, int, int]
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        f = self.features
        if f.abs_all < f.abs_first or f.abs_all < f.abs_final:
            raise ValueError("whole-document count below a sentence count")
        spans_by_sentence: dict[int, list[tuple[int, int]]] = {}
        for sent, start, end in self.matches:
            if start >= end:
                raise ValueError(f"empty span in match ({sent}, {start}, {end})")
            for other in spans_by_sentence.setdefault(sent, []):
                if start < other[1] and other[0] < end:
                    raise ValueError("overlapping hedge spans")
            spans_by_sentence[sent].append((start, end))


def _match_sentence(sentence, lexicon: HedgeLexicon):
    """Greedy longest-match scan over one sentence's word tokens.

    Yields (token start, token end, entry) for every lexical match,
    before rule filtering.
    """
    word_positions = [i for i, tok in enumerate(sentence) if tok.is_word]
    lowers = [sentence[i].lower for i in word_positions]
    w = 0
    while w < len(word_positions):
        hit = None
        for entry in lexicon.candidates(lowers[w]):
            size = len(entry.pattern)
            if w + size <= len(lowers) and tuple(lowers[w:w + size]) == entry.pattern:
                hit = entry
                break  # candidates come longest-first
        if hit is None:
            w += 1
            continue
        start = word_positions[w]
        end = word_positions[w + len(hit.pattern) - 1] + 1
        yield start, end, hit
        w += len(hit.pattern)


def detect_hedges(doc: ParsedDocument, lexicon: HedgeLexicon) -> HedgeAnnotation:
    """Match the lexicon against a parsed document and compute features."""
    matches = []
    for s_idx, sentence in enumerate(doc.sentences):
        for start, end, entry in _match_sentence(sentence, lexicon):
            if entry.rule_id is not None:
                if not RULES[entry.rule_id](sentence, start, end):
                    continue
            matches.append((s_idx, start, end))

    last = len(doc.sentences) - 1
    abs_first = sum(1 for s, _, _ in matches if s == 0)
    abs_final = sum(1 for s, _, _ in matches if s == last)
    abs_all = len(matches)

    words_first = sum(1 for t in doc.sentences[0] if t.is_word)
    words_final = sum(1 for t in doc.sentences[last] if t.is_word)
    words_all = doc.word_count()

    flags = []
    ratios = []
    for scope, count, words in (
        ("first", abs_first, words_first),
        ("final", abs_final, words_final),
        ("all", abs_all, words_all),
    ):
        if words == 0:
            flags.append(f"zero_word_{scope}")
            ratios.append(0.0)
        else:
            ratios.append(count / words)

    features = HedgeFeatures(
        abs_first=abs_first, abs_final=abs_final, abs_all=abs_all,
        ratio_first=ratios[0], ratio_final=ratios[1], ratio_all=ratios[2],
    )
    return HedgeAnnotation(
        argument_id=doc.argument_id,
        matches=tuple(matches),
        features=features,
        word_counts=(words_first, words_final, words_all),
        flags=tuple(flags),
    )


def hedge_features(annotation: HedgeAnnotation) -> HedgeFeatures:
    """The six feature variants of an annotation."""
    return annotation.features


def matched_surfaces(doc: ParsedDocument, annotation: HedgeAnnotation) -> list[str]:
    """Surface strings of the matched spans, for reports and debugging."""
    out = []
    for s_idx, start, end in annotation.matches:
        sentence = doc.sentences[s_idx]
        out.append(" ".join(t.surface for t in sentence[start:end] if t.is_word))
    return out


def annotate_corpus(
    corpus: Corpus,
    lexicon: HedgeLexicon,
    conllu_path: str | Path | None = None,
    jobs: int = 1,
) -> list[HedgeAnnotation]:
    """Detect hedges for every argument of a corpus, order preserved.

    Detection is pure per document, so documents can be distributed
    over worker processes when ``jobs`` > 1.
    """
    conllu_docs = read_conllu(conllu_path) if conllu_path is not None else None
    if jobs > 1 and conllu_docs is None:
        import multiprocessing

        with multiprocessing.Pool(jobs) as pool:
            docs = pool.starmap(
                _parse_one, [(a.id, a.text) for a in corpus], chunksize=64)
        return [detect_hedges(doc, lexicon) for doc in docs]
    return [
        detect_hedges(parse_document(argument, conllu_docs), lexicon)
        for argument in corpus
    ]


def _parse_one(argument_id: str, text: str) -> ParsedDocument:
    from .parsing import parse_text

    return parse_text(argument_id, text)


def write_annotations(annotations, path: str | Path) -> None:
    """Emit annotations as JSONL, one object per argument."""
    with open(path, "w", encoding="utf-8") as fh:
        for ann in annotations:
            record = {
                "id": ann.argument_id,
                "matches": [list(m) for m in ann.matches],
                "features": ann.features.as_dict(),
                "word_counts": list(ann.word_counts),
            }
            if ann.flags:
                record["flags"] = list(ann.flags)
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


def read_annotations(path: str | Path) -> list[HedgeAnnotation]:
    """Read back annotations written by :func:`write_annotations`."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"annotation file not found: {path}")
    annotations = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                features = HedgeFeatures(**record["features"])
                matches = tuple(tuple(m) for m in record["matches"])
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise InputError(
                    f"{path}:{line_no}: bad annotation record ({exc})") from None
            annotations.append(HedgeAnnotation(
                argument_id=record["id"],
                matches=matches,
                features=features,
                word_counts=tuple(record.get("word_counts", (0, 0, 0))),
                flags=tuple(record.get("flags", ())),
            ))
    return annotations
