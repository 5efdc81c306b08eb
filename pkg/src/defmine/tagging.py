"""UPOS tagging for concept phrases and definition text.

Two paths exist: a deterministic lexicon tagger (exact word lookup, then
longest-suffix rules, then a default tag) that keeps the pipeline runnable
offline, and pre-tagged CoNLL-style input which, when present for a source id,
always overrides the fallback tagger.  Accuracy of the fallback is explicitly
not a goal; pre-tagged input is the fidelity path.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

#: The 17-label Universal POS tag set.
UPOS_TAGS = frozenset(
    {
        "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
        "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
    }
)

_PUNCT_CHARS = set(string.punctuation)


class TagSetError(ValueError):
    """A tag outside the UPOS set was encountered."""


@dataclass(frozen=True)
class TaggedToken:
    text: str
    tag: str

    def __post_init__(self) -> None:
        if not self.text:
            raise ValueError("token text is empty")
        if self.tag not in UPOS_TAGS:
            raise TagSetError(f"tag {self.tag!r} is not a UPOS label")


def tokenize(text: str) -> list[str]:
    """Split on whitespace, peeling leading/trailing punctuation into own tokens.

    Hyphenated words stay whole ("cold-blooded"); internal apostrophes are
    kept.  A chunk consisting only of punctuation yields one token per
    character.
    """
    tokens: list[str] = []
    for chunk in text.split():
        prefix: list[str] = []
        suffix: list[str] = []
        start, end = 0, len(chunk)
        while start < end and chunk[start] in _PUNCT_CHARS:
            prefix.append(chunk[start])
            start += 1
        while end > start and chunk[end - 1] in _PUNCT_CHARS:
            suffix.append(chunk[end - 1])
            end -= 1
        tokens.extend(prefix)
        if start < end:
            tokens.append(chunk[start:end])
        tokens.extend(reversed(suffix))
    return tokens


def is_punct(token: str) -> bool:
    return bool(token) and all(ch in _PUNCT_CHARS for ch in token)


@dataclass(frozen=True)
class TagLexicon:
    """Word lookups, longest-suffix-first rules and a default tag.

    Suffix rules are re-sorted longest-first at construction (stable within a
    length, preserving file priority order).
    """

    word_to_tag: Mapping[str, str]
    suffix_rules: tuple[tuple[str, str], ...] = ()
    default_tag: str = "NOUN"

    def __post_init__(self) -> None:
        if self.default_tag not in UPOS_TAGS:
            raise TagSetError(f"default tag {self.default_tag!r} is not a UPOS label")
        ordered = tuple(
            sorted(self.suffix_rules, key=lambda rule: -len(rule[0]))
        )
        object.__setattr__(self, "suffix_rules", ordered)

    def tag_word(self, word: str) -> str:
        lowered = word.lower()
        tag = self.word_to_tag.get(lowered)
        if tag is not None:
            return tag
        for suffix, suffix_tag in self.suffix_rules:
            if lowered.endswith(suffix):
                return suffix_tag
        return self.default_tag


def tag_phrase(phrase: str, lexicon: TagLexicon) -> list[TaggedToken]:
    """Tokenize and tag a phrase deterministically.

    Punctuation-only tokens are tagged PUNCT; everything else goes through
    the lexicon (exact lookup, suffix rules, default).
    """
    tagged: list[TaggedToken] = []
    for token in tokenize(phrase):
        if is_punct(token):
            tagged.append(TaggedToken(token, "PUNCT"))
        else:
            tagged.append(TaggedToken(token, lexicon.tag_word(token)))
    return tagged


def parse_lexicon(lines: Iterable[str]) -> dict[str, str]:
    """Parse a ``word<TAB>tag`` lexicon file."""
    table: dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise TagSetError(f"lexicon line {lineno}: expected 2 columns")
        word, tag = cols
        if tag not in UPOS_TAGS:
            raise TagSetError(f"lexicon line {lineno}: tag {tag!r} is not a UPOS label")
        table[word.lower()] = tag
    return table


def parse_suffix_rules(lines: Iterable[str]) -> list[tuple[str, str]]:
    """Parse a ``suffix<TAB>tag`` rule file, keeping file order as priority."""
    rules: list[tuple[str, str]] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise TagSetError(f"suffix rules line {lineno}: expected 2 columns")
        suffix, tag = cols
        if tag not in UPOS_TAGS:
            raise TagSetError(f"suffix rules line {lineno}: tag {tag!r} is not a UPOS label")
        rules.append((suffix.lower(), tag))
    return rules


def load_lexicon(
    lexicon_path,
    suffix_rules_path=None,
    default_tag: str = "NOUN",
) -> TagLexicon:
    with open(lexicon_path, encoding="utf-8") as fh:
        words = parse_lexicon(fh)
    rules: list[tuple[str, str]] = []
    if suffix_rules_path is not None:
        with open(suffix_rules_path, encoding="utf-8") as fh:
            rules = parse_suffix_rules(fh)
    return TagLexicon(words, tuple(rules), default_tag)


def load_pretagged(lines: Iterable[str]) -> dict[str, list[TaggedToken]]:
    """Parse CoNLL-style pre-tagged rows ``source_id<TAB>token<TAB>upos``.

    Blank lines separate sentences; each sentence block must carry a single
    source id, unseen so far.  Any malformed row is fatal, naming the line.
    """
    sentences: dict[str, list[TaggedToken]] = {}
    current_id: str | None = None
    current: list[TaggedToken] = []

    def flush() -> None:
        nonlocal current_id, current
        if current_id is not None:
            sentences[current_id] = current
        current_id, current = None, []

    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            flush()
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise TagSetError(f"pre-tagged line {lineno}: expected 3 columns, got {len(cols)}")
        source_id, token, tag = cols
        if tag not in UPOS_TAGS:
            raise TagSetError(f"pre-tagged line {lineno}: tag {tag!r} is not a UPOS label")
        if not token:
            raise TagSetError(f"pre-tagged line {lineno}: empty token")
        if current_id is None:
            if source_id in sentences:
                raise TagSetError(
                    f"pre-tagged line {lineno}: duplicate source id {source_id!r}"
                )
            current_id = source_id
        elif source_id != current_id:
            raise TagSetError(
                f"pre-tagged line {lineno}: source id changed mid-sentence "
                f"({current_id!r} -> {source_id!r})"
            )
        current.append(TaggedToken(token, tag))
    flush()
    return sentences
