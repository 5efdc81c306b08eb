"""Novelty of candidate triples against reference triple sets.

A candidate is non-novel when a reference triple has the same relation (unless
relation-agnostic mode is on) and identical normalized head/tail bags.  The
embedding-distance proxy is reported for diagnostics only and never used for
filtering.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import Triple
from .textnorm import ConceptBag, NormalizationPipeline, normalize_concept

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class NoveltyVerdict:
    novel: bool
    matched_reference: tuple[str, str, str] | None = None

    def __post_init__(self) -> None:
        if self.novel and self.matched_reference is not None:
            raise ValueError("novel verdicts carry no witness")
        if not self.novel and self.matched_reference is None:
            raise ValueError("non-novel verdicts need a witness")


class ReferenceIndex:
    """Exact-equality lookups over normalized reference triples.

    Two keyings are maintained: (relation, head bag, tail bag) and the
    relation-agnostic (head bag, tail bag).
    """

    def __init__(self, references: Iterable[Triple], pipeline: NormalizationPipeline):
        self.pipeline = pipeline
        self._by_relation: dict[tuple[str, ConceptBag, ConceptBag], tuple[str, str, str]] = {}
        self._agnostic: dict[tuple[ConceptBag, ConceptBag], tuple[str, str, str]] = {}
        count = 0
        for ref in references:
            head_bag = normalize_concept(ref.head, pipeline)
            tail_bag = normalize_concept(ref.tail, pipeline)
            witness = ref.key()
            self._by_relation.setdefault((ref.relation.value, head_bag, tail_bag), witness)
            self._agnostic.setdefault((head_bag, tail_bag), witness)
            count += 1
        self.reference_count = count

    def lookup(
        self,
        relation_label: str,
        head_bag: ConceptBag,
        tail_bag: ConceptBag,
        relation_agnostic: bool = False,
    ) -> tuple[str, str, str] | None:
        if relation_agnostic:
            return self._agnostic.get((head_bag, tail_bag))
        return self._by_relation.get((relation_label, head_bag, tail_bag))


def build_reference_index(
    references: Iterable[Triple], pipeline: NormalizationPipeline
) -> ReferenceIndex:
    return ReferenceIndex(references, pipeline)


def is_novel(candidate, index: ReferenceIndex, relation_agnostic: bool = False) -> NoveltyVerdict:
    """Check one candidate (anything with head/relation/tail) against the index."""
    head_bag = normalize_concept(candidate.head, index.pipeline)
    tail_bag = normalize_concept(candidate.tail, index.pipeline)
    witness = index.lookup(
        candidate.relation.value, head_bag, tail_bag, relation_agnostic=relation_agnostic
    )
    if witness is None:
        return NoveltyVerdict(novel=True)
    return NoveltyVerdict(novel=False, matched_reference=witness)


def novelty_rate(
    candidates: Sequence, index: ReferenceIndex, relation_agnostic: bool = False
) -> float:
    """Fraction of candidates that are novel; empty input counts as rate 1."""
    if not candidates:
        log.warning("novelty_rate over zero candidates; defining rate as 1.0")
        return 1.0
    novel = sum(
        1 for cand in candidates if is_novel(cand, index, relation_agnostic).novel
    )
    return novel / len(candidates)


def _average_embedding(text: str, embeddings: Mapping[str, np.ndarray], dim: int) -> np.ndarray:
    vectors = [
        np.asarray(embeddings[word], dtype=np.float64)
        for word in text.lower().split()
        if word in embeddings
    ]
    if not vectors:
        log.warning("no embeddings for concept %r; using zero vector", text)
        return np.zeros(dim)
    return np.mean(vectors, axis=0)


def embedding_novelty_distance(
    candidate,
    references: Sequence[Triple],
    embeddings: Mapping[str, np.ndarray],
) -> float:
    """Min over references of ||avg(head_c)-avg(head_r)|| + ||avg(tail_c)-avg(tail_r)||.

    A diagnostic proxy only; it is reported but never used to filter.
    """
    if not references:
        raise ValueError("embedding distance needs at least one reference triple")
    dim = len(next(iter(embeddings.values()))) if embeddings else 1
    cand_head = _average_embedding(candidate.head, embeddings, dim)
    cand_tail = _average_embedding(candidate.tail, embeddings, dim)
    best = np.inf
    for ref in references:
        head_dist = np.linalg.norm(cand_head - _average_embedding(ref.head, embeddings, dim))
        tail_dist = np.linalg.norm(cand_tail - _average_embedding(ref.tail, embeddings, dim))
        best = min(best, head_dist + tail_dist)
    return float(best)


# ---------------------------------------------------------------------------
# Report files


def write_novelty_report(verdicts: Iterable[tuple], fh) -> None:
    """JSON-lines: one (candidate key, verdict) record per candidate."""
    for candidate, verdict in verdicts:
        record = {
            "head": candidate.head,
            "relation": candidate.relation.value,
            "tail": candidate.tail,
            "novel": verdict.novel,
            "matched_reference": (
                list(verdict.matched_reference) if verdict.matched_reference else None
            ),
        }
        fh.write(json.dumps(record, sort_keys=True) + "\n")


def write_rate_summary_csv(rates: Mapping[str, float], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["relation", "novelty_rate"])
    for relation_label in sorted(rates):
        writer.writerow([relation_label, repr(rates[relation_label])])
