"""Hedge lexicon and syntactic disambiguation rules.

A lexicon is a list of lowercase surface patterns (one or more words),
each optionally tied to a disambiguation rule. Rules are deterministic
predicates over the matched span and its sentence. Every rule works on
two levels: full dependency structure when the sentence comes from a
CoNLL-U parse, and a positional/POS fallback for the builtin parser,
whose sentences carry no head links.

File format: one pattern per line, words space-separated, optional
``|rule_id`` suffix; ``#`` starts a comment.
"""
from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Callable

from .errors import LexiconError
from .parsing import (
    Sentence,
    children_of,
    head_of,
    sentence_has_deps,
    siblings_of,
)

FIRST_PERSON_SUBJECTS = frozenset({"i", "we"})
FIRST_PERSON_POSSESSIVES = frozenset({"my", "our", "mine", "ours"})

RuleFn = Callable[[Sentence, int, int], bool]


def _word_indices(sentence: Sentence) -> list[int]:
    return [i for i, t in enumerate(sentence) if t.is_word]


def _next_words(sentence: Sentence, end: int, count: int):
    """Word tokens following token index ``end - 1``."""
    found = []
    for i in range(end, len(sentence)):
        if sentence[i].is_word:
            found.append(sentence[i])
            if len(found) == count:
                break
    return found


def _prev_words(sentence: Sentence, start: int, count: int):
    """Word tokens preceding token index ``start``, nearest first."""
    found = []
    for i in range(start - 1, -1, -1):
        if sentence[i].is_word:
            found.append(sentence[i])
            if len(found) == count:
                break
    return found


def quantity_context(sentence: Sentence, start: int, end: int) -> bool:
    """Approximator use of about/around/like: adverbial or tied to a
    numeral (head, dependent, or sibling); prepositional use is not a
    hedge."""
    token = sentence[start]
    if token.pos == "ADV":
        return True
    if sentence_has_deps(sentence):
        head = head_of(sentence, start)
        if head is not None and head.pos == "NUM":
            return True
        if any(t.pos == "NUM" for t in children_of(sentence, start)):
            return True
        return any(t.pos == "NUM" for t in siblings_of(sentence, start))
    nxt = _next_words(sentence, end, 1)
    return bool(nxt) and nxt[0].pos == "NUM"


def adverbial_use(sentence: Sentence, start: int, end: int) -> bool:
    """Hedge when modifying an adjective or adverb (degree use); the
    attributive reading modifies a noun and is not a hedge."""
    if sentence_has_deps(sentence):
        head = head_of(sentence, start)
        return head is not None and head.pos in ("ADJ", "ADV")
    nxt = _next_words(sentence, end, 1)
    return bool(nxt) and nxt[0].pos in ("ADJ", "ADV")


def first_person_anchor(sentence: Sentence, start: int, end: int) -> bool:
    """Hedge when anchored to the speaker: a first-person possessive
    dependent, or a first-person nominal subject on the head."""
    if sentence_has_deps(sentence):
        for child in children_of(sentence, start):
            if child.lower in FIRST_PERSON_POSSESSIVES:
                return True
        head_idx = sentence[start].head
        if head_idx:
            for child in children_of(sentence, head_idx - 1):
                if child.deprel.startswith("nsubj") and child.lower in FIRST_PERSON_SUBJECTS:
                    return True
        return False
    for tok in _prev_words(sentence, start, 2):
        if tok.lower in FIRST_PERSON_POSSESSIVES:
            return True
    for i in range(start):
        if sentence[i].is_word and sentence[i].lower in FIRST_PERSON_SUBJECTS:
            return True
    return False


def first_person_subject(sentence: Sentence, start: int, end: int) -> bool:
    """Epistemic verbs hedge only with a first-person subject."""
    if sentence_has_deps(sentence):
        return any(
            t.deprel.startswith("nsubj") and t.lower in FIRST_PERSON_SUBJECTS
            for t in children_of(sentence, start)
        )
    return any(
        t.lower in FIRST_PERSON_SUBJECTS
        for t in _prev_words(sentence, start, 3)
    )


def clausal_complement(sentence: Sentence, start: int, end: int) -> bool:
    """Hedge when taking a clausal complement (it appears that ...)."""
    if sentence_has_deps(sentence):
        return any(
            t.deprel in ("ccomp", "xcomp") for t in children_of(sentence, start)
        )
    nxt = _next_words(sentence, end, 2)
    if not nxt:
        return False
    return nxt[0].lower == "to" or any(t.lower == "that" for t in nxt)


def not_before_than(sentence: Sentence, start: int, end: int) -> bool:
    nxt = _next_words(sentence, end, 1)
    return not (nxt and nxt[0].lower == "than")


def not_before_preposition(sentence: Sentence, start: int, end: int) -> bool:
    nxt = _next_words(sentence, end, 1)
    if not nxt:
        return True
    return nxt[0].pos != "ADP" and nxt[0].lower not in ("about", "of", "over", "on")


def not_attributive(sentence: Sentence, start: int, end: int) -> bool:
    """Reject the attributive reading (a likely story)."""
    if sentence_has_deps(sentence):
        token = sentence[start]
        head = head_of(sentence, start)
        if token.deprel == "amod" and head is not None and head.pos in ("NOUN", "PROPN"):
            return False
        return True
    prev = _prev_words(sentence, start, 1)
    if not prev:
        return True
    return prev[0].pos != "DET" and prev[0].lower not in FIRST_PERSON_POSSESSIVES


def not_noun(sentence: Sentence, start: int, end: int) -> bool:
    return sentence[start].pos not in ("NOUN", "PROPN")


def before_quantity(sentence: Sentence, start: int, end: int) -> bool:
    """Approximation reading (roughly 10, roughly equal); rejects
    manner use on a verb (treated roughly)."""
    if sentence_has_deps(sentence):
        head = head_of(sentence, start)
        if head is None or head.pos != "VERB":
            return True
        return head.lower in ("speak", "speaking", "say", "said")
    nxt = _next_words(sentence, end, 1)
    return bool(nxt) and nxt[0].pos in ("NUM", "ADJ")


RULES: dict[str, RuleFn] = {
    "quantity_context": quantity_context,
    "adverbial_use": adverbial_use,
    "first_person_anchor": first_person_anchor,
    "first_person_subject": first_person_subject,
    "clausal_complement": clausal_complement,
    "not_before_than": not_before_than,
    "not_before_preposition": not_before_preposition,
    "not_attributive": not_attributive,
    "not_noun": not_noun,
    "before_quantity": before_quantity,
}


@dataclass(frozen=True)
class LexiconEntry:
    pattern: tuple[str, ...]
    rule_id: str | None = None


class HedgeLexicon:
    """Immutable pattern collection with a first-word index for
    longest-match scanning."""

    def __init__(self, entries: list[LexiconEntry] | list[tuple], name: str = "custom"):
        normalized = []
        seen = set()
        for entry in entries:
            if not isinstance(entry, LexiconEntry):
                pattern, rule_id = entry
                entry = LexiconEntry(tuple(pattern), rule_id)
            if not entry.pattern or any(not w for w in entry.pattern):
                raise LexiconError(f"empty pattern in entry {entry!r}")
            if any(w != w.lower() for w in entry.pattern):
                raise LexiconError(f"pattern not lowercase: {entry.pattern!r}")
            if entry.pattern in seen:
                raise LexiconError(f"duplicate pattern: {' '.join(entry.pattern)!r}")
            if entry.rule_id is not None and entry.rule_id not in RULES:
                raise LexiconError(f"unregistered rule id: {entry.rule_id!r}")
            seen.add(entry.pattern)
            normalized.append(entry)
        self.name = name
        self.entries: tuple[LexiconEntry, ...] = tuple(normalized)
        index: dict[str, list[LexiconEntry]] = {}
        for entry in self.entries:
            index.setdefault(entry.pattern[0], []).append(entry)
        for bucket in index.values():
            bucket.sort(key=lambda e: len(e.pattern), reverse=True)
        self._index = {k: tuple(v) for k, v in index.items()}

    def __len__(self):
        return len(self.entries)

    def candidates(self, first_word: str) -> tuple[LexiconEntry, ...]:
        """Entries starting with ``first_word``, longest pattern first."""
        return self._index.get(first_word, ())

    def without_rules(self) -> "HedgeLexicon":
        """Copy with all disambiguation rules stripped (pure matching)."""
        return HedgeLexicon(
            [LexiconEntry(e.pattern, None) for e in self.entries],
            name=f"{self.name}-norules",
        )


def parse_lexicon_lines(lines, name: str = "custom") -> HedgeLexicon:
    entries = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "|" in line:
            pattern_part, rule_id = line.rsplit("|", 1)
            rule_id = rule_id.strip()
            if not rule_id:
                raise LexiconError(f"line {line_no}: empty rule id")
        else:
            pattern_part, rule_id = line, None
        pattern = tuple(pattern_part.split())
        if not pattern:
            raise LexiconError(f"line {line_no}: empty pattern")
        entries.append(LexiconEntry(pattern, rule_id))
    return HedgeLexicon(entries, name=name)


def load_lexicon(path: str | Path | None = None) -> HedgeLexicon:
    """Load a lexicon file; with no path, the packaged default."""
    if path is None:
        text = (
            resources.files("argstrength").joinpath("data/hedges.txt").read_text("utf-8")
        )
        return parse_lexicon_lines(text.splitlines(), name="builtin")
    path = Path(path)
    if not path.exists():
        raise LexiconError(f"lexicon file not found: {path}")
    return parse_lexicon_lines(
        path.read_text("utf-8").splitlines(), name=path.stem
    )
