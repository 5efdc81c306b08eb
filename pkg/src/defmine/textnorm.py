"""Concept-string normalization: the unit of novelty equality.

Pipeline order is fixed: lowercase -> tokenize -> stopword removal ->
lemmatize -> stem.  The result is a multiset (bag) of stems; duplicate stems
are significant.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Mapping

from .porter import PorterStemmer
from .tagging import is_punct, tokenize


@dataclass(frozen=True)
class ConceptBag:
    """A multiset of stems, stored as a sorted tuple so equality is order-free."""

    stems: tuple[str, ...]

    @classmethod
    def from_iterable(cls, stems: Iterable[str]) -> "ConceptBag":
        return cls(tuple(sorted(stems)))

    def __len__(self) -> int:
        return len(self.stems)


@dataclass(frozen=True)
class NormalizationPipeline:
    stopwords: frozenset[str]
    lemma_lexicon: Mapping[str, str]
    stemmer: PorterStemmer

    @classmethod
    def create(
        cls,
        stopwords: Iterable[str] | None = None,
        lemma_lexicon: Mapping[str, str] | None = None,
    ) -> "NormalizationPipeline":
        """Build a pipeline; stopwords default to the packaged english list."""
        if stopwords is None:
            stopwords = load_default_stopwords()
        return cls(frozenset(stopwords), dict(lemma_lexicon or {}), PorterStemmer())


def normalize_concept(text: str, pipeline: NormalizationPipeline) -> ConceptBag:
    """Normalize a concept string to its bag of stems."""
    stems: list[str] = []
    for token in tokenize(text.lower()):
        if is_punct(token):
            continue
        if token in pipeline.stopwords:
            continue
        lemma = pipeline.lemma_lexicon.get(token, token)
        stems.append(pipeline.stemmer.stem(lemma))
    return ConceptBag.from_iterable(stems)


def parse_stopwords(lines: Iterable[str]) -> frozenset[str]:
    """One lowercased word per line; blank lines and # comments ignored."""
    words = set()
    for raw in lines:
        word = raw.strip().lower()
        if word and not word.startswith("#"):
            words.add(word)
    return frozenset(words)


def parse_lemma_lexicon(lines: Iterable[str]) -> dict[str, str]:
    """TSV ``word<TAB>lemma``; lookups fall back to identity."""
    table: dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise ValueError(f"lemma lexicon line {lineno}: expected 2 columns")
        table[cols[0].lower()] = cols[1].lower()
    return table


def load_default_stopwords() -> frozenset[str]:
    text = resources.files("defmine").joinpath("data/stopwords.txt").read_text("utf-8")
    return parse_stopwords(text.splitlines())
