"""Tokenized and parsed argument text.

Hedge disambiguation needs sentence boundaries, coarse POS tags and,
where available, dependency links. The primary parse source is a
CoNLL-U file produced by any external parser; a builtin heuristic
tokenizer/tagger covers raw text so the pipeline also runs without one.
The builtin mode tags the closed classes the shipped disambiguation
rules rely on (numerals, pronouns, adjectives, adverbs) and leaves all
head indices at 0, which the rules treat as "no dependency structure".
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Argument
from .errors import ParseSourceError

UPOS_TAGS = frozenset({
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
})


@dataclass(frozen=True)
class Token:
    surface: str
    lower: str
    pos: str
    head: int = 0        # 1-based index of the head within the sentence, 0 = root
    deprel: str = "dep"
    is_word: bool = True

    def __post_init__(self):
        if self.pos not in UPOS_TAGS:
            raise ValueError(f"{self.pos!r} is not a UPOS tag")
        if self.head < 0:
            raise ValueError("head index must be >= 0")


Sentence = tuple[Token, ...]


@dataclass(frozen=True)
class ParsedDocument:
    argument_id: str
    sentences: tuple[Sentence, ...]

    def __post_init__(self):
        if not self.sentences or any(not s for s in self.sentences):
            raise ValueError("document needs at least one non-empty sentence")
        for sent in self.sentences:
            for tok in sent:
                if tok.head > len(sent):
                    raise ValueError(
                        f"head index {tok.head} outside sentence of {len(sent)} tokens"
                    )

    def word_count(self) -> int:
        return sum(1 for s in self.sentences for t in s if t.is_word)


def sentence_has_deps(sentence: Sentence) -> bool:
    """True when the sentence carries real dependency structure."""
    return any(t.head != 0 for t in sentence)


def children_of(sentence: Sentence, index: int) -> list[Token]:
    """Dependents of the token at 0-based ``index``."""
    target = index + 1
    return [t for t in sentence if t.head == target]


def head_of(sentence: Sentence, index: int) -> Token | None:
    head = sentence[index].head
    return sentence[head - 1] if head else None


def siblings_of(sentence: Sentence, index: int) -> list[Token]:
    head = sentence[index].head
    if head == 0:
        return []
    return [t for i, t in enumerate(sentence) if t.head == head and i != index]


# ---------------------------------------------------------------------------
# Builtin heuristic tokenizer and tagger
# ---------------------------------------------------------------------------

_SENTENCE_RE = re.compile(r"[^.!?]*[.!?]+(?:['\"”’)\]]+)?\s*|[^.!?]+$", re.S)
_TOKEN_RE = re.compile(r"[A-Za-z0-9]+(?:['’-][A-Za-z0-9]+)*|[^\sA-Za-z0-9]")

_SPELLED_NUMBERS = {
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
    "nine", "ten", "eleven", "twelve", "dozen", "hundred", "thousand",
    "million", "billion", "trillion", "mio",
}
_PRONOUNS = {
    "i", "you", "he", "she", "it", "we", "they", "me", "him", "her", "us",
    "them", "myself", "yourself", "himself", "herself", "itself",
    "ourselves", "themselves", "my", "your", "his", "its", "our", "their",
    "mine", "yours", "hers", "ours", "theirs", "someone", "somebody",
    "anyone", "anybody", "everyone", "everybody", "nobody", "something",
    "anything", "everything", "nothing", "who", "whom", "whose", "what",
    "one's", "oneself",
}
_DETERMINERS = {
    "a", "an", "the", "this", "that", "these", "those", "some", "any",
    "no", "every", "each", "either", "neither", "both", "all",
}
_ADPOSITIONS = {
    "of", "in", "on", "at", "by", "for", "with", "from", "to", "into",
    "onto", "over", "under", "between", "among", "through", "during",
    "without", "within", "against", "towards", "toward", "upon", "per",
    "off", "near", "across", "behind", "beyond", "despite", "throughout",
}
_AUXILIARIES = {
    "am", "is", "are", "was", "were", "be", "been", "being", "do", "does",
    "did", "have", "has", "had", "will", "would", "can", "could", "shall",
    "should", "may", "might", "must", "ought",
}
_CCONJ = {"and", "or", "but", "nor", "yet"}
_SCONJ = {
    "because", "if", "while", "although", "though", "whether", "since",
    "unless", "when", "whenever", "wherever", "whereas", "until", "after",
    "before", "once",
}
_ADVERBS = {
    "very", "really", "quite", "rather", "too", "so", "now", "then",
    "here", "there", "almost", "just", "even", "still", "never", "always",
    "often", "sometimes", "again", "soon", "maybe", "perhaps", "not",
    "longer", "more", "most", "less", "least", "far", "away", "also",
    "together", "instead", "anyway", "somewhat", "pretty", "fairly",
}
_ADJECTIVES = {
    "certain", "sure", "likely", "unlikely", "good", "bad", "big", "small",
    "long", "short", "high", "low", "new", "old", "fine", "harsh", "dumb",
    "wrong", "right", "true", "false", "great", "same", "different",
    "other", "many", "much", "few", "several", "own", "last", "first",
    "possible", "probable", "general", "partial", "fair", "official",
    "whole", "real", "free", "full", "mandatory", "beneficial", "severe",
    "addictive", "personal", "financial", "moral", "lasting", "pretty",
}
_ADJ_SUFFIXES = ("able", "ible", "ful", "ous", "ive", "less", "ish", "ary")
_VERBS = {
    "go", "goes", "went", "gone", "get", "gets", "got", "gotten", "make",
    "makes", "made", "say", "says", "said", "see", "sees", "saw", "seen",
    "know", "knows", "knew", "known", "take", "takes", "took", "taken",
    "come", "comes", "came", "want", "wants", "wanted", "give", "gives",
    "gave", "given", "use", "uses", "used", "need", "needs", "needed",
    "talk", "talks", "talked", "think", "thinks", "thought", "believe",
    "believes", "believed", "feel", "feels", "felt", "leave", "leaves",
    "left", "wait", "waits", "waited", "decide", "decides", "decided",
    "eat", "eats", "ate", "eaten", "become", "becomes", "became", "let",
    "lets", "put", "puts", "find", "finds", "found", "tell", "tells",
    "told", "ask", "asks", "asked", "seem", "seems", "seemed", "help",
    "helps", "helped", "mean", "means", "meant", "keep", "keeps", "kept",
    "look", "looks", "looked", "sound", "sounds", "sounded",
}

_FIRST_PERSON_SUBJECTS = frozenset({"i", "we"})
_FIRST_PERSON_POSSESSIVES = frozenset({"my", "our", "mine", "ours"})

_NUM_RE = re.compile(r"\d[\d,.:%-]*")


def _normalize(lower: str) -> str:
    return lower.replace("’", "'")


def _looks_numeric(lower: str) -> bool:
    return bool(_NUM_RE.fullmatch(lower)) or lower in _SPELLED_NUMBERS


def _tag(surface: str, lower: str, idx: int, words: list[str]) -> str:
    if not any(ch.isalnum() for ch in surface):
        return "PUNCT"
    if _looks_numeric(lower):
        return "NUM"
    if lower in ("about", "around", "like"):
        # quantifier use before a numeral reads as an adverb, else adposition
        nxt = words[idx + 1] if idx + 1 < len(words) else None
        return "ADV" if nxt is not None and _looks_numeric(nxt) else "ADP"
    if lower in _PRONOUNS:
        return "PRON"
    if lower in _DETERMINERS:
        return "DET"
    if lower in _AUXILIARIES:
        return "AUX"
    if lower in _ADPOSITIONS:
        return "ADP"
    if lower in _CCONJ:
        return "CCONJ"
    if lower in _SCONJ:
        return "SCONJ"
    if lower in _ADVERBS or (lower.endswith("ly") and len(lower) > 3):
        return "ADV"
    if lower in _ADJECTIVES or lower.endswith(_ADJ_SUFFIXES):
        return "ADJ"
    if lower in _VERBS:
        return "VERB"
    if surface[0].isupper() and idx > 0:
        return "PROPN"
    return "NOUN"


def parse_text(argument_id: str, text: str) -> ParsedDocument:
    """Heuristic parse: terminal-punctuation sentence split, word/punct
    tokenization, closed-class POS tagging, no dependency links."""
    if not text or not text.strip():
        raise ParseSourceError(f"argument {argument_id!r} has empty text")
    sentences = []
    for raw in _SENTENCE_RE.findall(text):
        raw = raw.strip()
        if not raw:
            continue
        surfaces = _TOKEN_RE.findall(raw)
        if not surfaces:
            continue
        lowers = [_normalize(s.lower()) for s in surfaces]
        word_positions = [i for i, s in enumerate(surfaces)
                          if any(ch.isalnum() for ch in s)]
        word_lowers = [lowers[i] for i in word_positions]
        tokens = []
        for i, surface in enumerate(surfaces):
            if i in word_positions:
                widx = word_positions.index(i)
                pos = _tag(surface, lowers[i], widx, word_lowers)
            else:
                pos = "PUNCT"
            tokens.append(Token(
                surface=surface, lower=lowers[i], pos=pos,
                is_word=pos != "PUNCT",
            ))
        sentences.append(tuple(tokens))
    if not sentences:
        raise ParseSourceError(f"argument {argument_id!r} has no sentences")
    return ParsedDocument(argument_id=argument_id, sentences=tuple(sentences))


# ---------------------------------------------------------------------------
# CoNLL-U input
# ---------------------------------------------------------------------------

def read_conllu(path: str | Path) -> dict[str, ParsedDocument]:
    """Read a 10-column CoNLL-U file into documents keyed by argument id.

    Documents are delimited by ``# newdoc id = <argument_id>`` comments;
    multiword-token ranges and empty nodes are skipped so that head
    indices keep referring to syntactic words.
    """
    path = Path(path)
    if not path.exists():
        raise ParseSourceError(f"CoNLL-U file not found: {path}")
    documents: dict[str, ParsedDocument] = {}
    doc_id: str | None = None
    doc_sentences: list[Sentence] = []
    current: list[Token] = []

    def flush_sentence():
        nonlocal current
        if current:
            doc_sentences.append(tuple(current))
            current = []

    def flush_document():
        nonlocal doc_sentences
        flush_sentence()
        if doc_id is not None:
            if not doc_sentences:
                raise ParseSourceError(f"document {doc_id!r} has no sentences")
            if doc_id in documents:
                raise ParseSourceError(f"duplicate document id {doc_id!r}")
            documents[doc_id] = ParsedDocument(
                argument_id=doc_id, sentences=tuple(doc_sentences))
        doc_sentences = []

    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                flush_sentence()
                continue
            if line.startswith("#"):
                match = re.match(r"#\s*newdoc(?:\s+id)?\s*=\s*(.+)", line)
                if match:
                    flush_document()
                    doc_id = match.group(1).strip()
                continue
            cols = line.split("\t")
            if len(cols) != 10:
                raise ParseSourceError(
                    f"{path}:{line_no}: expected 10 tab-separated columns")
            tok_id, form, _lemma, upos, _xpos, _feats, head, deprel = cols[:8]
            if "-" in tok_id or "." in tok_id:
                continue  # multiword token range / empty node
            if upos not in UPOS_TAGS:
                raise ParseSourceError(
                    f"{path}:{line_no}: unknown UPOS tag {upos!r}")
            try:
                head_idx = int(head)
            except ValueError:
                raise ParseSourceError(
                    f"{path}:{line_no}: non-integer head {head!r}") from None
            current.append(Token(
                surface=form, lower=_normalize(form.lower()), pos=upos,
                head=head_idx, deprel=deprel, is_word=upos != "PUNCT",
            ))
    flush_document()
    return documents


def parse_document(
    argument: Argument,
    conllu_docs: dict[str, ParsedDocument] | None = None,
) -> ParsedDocument:
    """Parse one argument, preferring a pre-parsed CoNLL-U document."""
    if conllu_docs is not None:
        doc = conllu_docs.get(argument.id)
        if doc is None:
            raise ParseSourceError(
                f"no CoNLL-U parse for argument {argument.id!r}")
        return doc
    return parse_text(argument.id, argument.text)
