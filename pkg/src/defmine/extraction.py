"""Match selected POS patterns against tagged definitions to build candidates.

The defined term is always the subject; every pattern match in the definition
contributes the matched span as an object.  All overlapping matches are kept,
then per-relation duplicates by (lowercased head, lowercased tail) collapse to
the first occurrence, and self-loops (tail == head) are dropped.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._kernels import match_positions
from .corpus import TermDefinition
from .patterns import PatternTable, PosPattern
from .relations import ALL_RELATIONS, Relation
from .tagging import TaggedToken, UPOS_TAGS

#: Deterministic tag -> small-int encoding shared by matcher paths.
UPOS_ORDER: tuple[str, ...] = tuple(sorted(UPOS_TAGS))
TAG_IDS: dict[str, int] = {tag: index for index, tag in enumerate(UPOS_ORDER)}


class ExtractionError(Exception):
    """A definition had no token sequence, or provenance broke."""


@dataclass(frozen=True)
class CandidateTriple:
    """An extracted (term, relation, span) candidate with full provenance."""

    head: str
    relation: Relation
    tail: str
    term: str
    sense_index: int
    pattern: PosPattern
    token_span: tuple[int, int]

    @property
    def definition_source(self) -> tuple[str, int]:
        return (self.term, self.sense_index)

    def key(self) -> tuple[str, str, str]:
        return (self.head, self.relation.value, self.tail)


def _encode_tags(tokens: Sequence[TaggedToken]) -> np.ndarray:
    return np.array([TAG_IDS[token.tag] for token in tokens], dtype=np.int16)


def match_spans(tokens: Sequence[TaggedToken], pattern: PosPattern) -> list[tuple[int, int]]:
    """Every contiguous half-open window whose tags equal the pattern, left to right."""
    if len(pattern) == 0:
        raise ValueError("empty pattern")
    if len(pattern) > len(tokens):
        return []
    seq = _encode_tags(tokens)
    pat = np.array([TAG_IDS[tag] for tag in pattern.tags], dtype=np.int16)
    return [(int(start), int(start) + len(pattern)) for start in match_positions(seq, pat)]


def extract_candidates(
    definitions: Sequence[TermDefinition],
    tagged: Mapping[str, Sequence[TaggedToken]],
    table: PatternTable,
) -> dict[Relation, list[CandidateTriple]]:
    """Run every selected pattern over every tagged definition.

    Output lists are ordered by (definition, pattern, span) within each
    relation; extraction is fully deterministic.  A definition missing from
    ``tagged`` is fatal.
    """
    for definition in definitions:
        if definition.source_id not in tagged:
            raise ExtractionError(
                f"definition {definition.source_id!r} has no token sequence"
            )
    encoded: dict[str, np.ndarray] = {
        definition.source_id: _encode_tags(tagged[definition.source_id])
        for definition in definitions
    }
    out: dict[Relation, list[CandidateTriple]] = {}
    for relation in ALL_RELATIONS:
        candidates: list[CandidateTriple] = []
        seen: set[tuple[str, str]] = set()
        for definition in definitions:
            tokens = tagged[definition.source_id]
            seq = encoded[definition.source_id]
            head = definition.term
            head_norm = head.lower()
            for pattern, _frequency in table.patterns_for(relation):
                if len(pattern) > len(tokens):
                    continue
                pat = np.array([TAG_IDS[tag] for tag in pattern.tags], dtype=np.int16)
                for start in match_positions(seq, pat):
                    begin, end = int(start), int(start) + len(pattern)
                    tail = " ".join(token.text for token in tokens[begin:end])
                    tail_norm = tail.lower()
                    if tail_norm == head_norm:
                        continue
                    dedup_key = (head_norm, tail_norm)
                    if dedup_key in seen:
                        continue
                    seen.add(dedup_key)
                    candidates.append(
                        CandidateTriple(
                            head=head,
                            relation=relation,
                            tail=tail,
                            term=definition.term,
                            sense_index=definition.sense_index,
                            pattern=pattern,
                            token_span=(begin, end),
                        )
                    )
        out[relation] = candidates
    return out


# ---------------------------------------------------------------------------
# Candidate interchange files


def write_candidates_jsonl(candidates: Iterable[CandidateTriple], fh) -> None:
    for cand in candidates:
        record = {
            "head": cand.head,
            "relation": cand.relation.value,
            "tail": cand.tail,
            "term": cand.term,
            "sense_index": cand.sense_index,
            "pattern": cand.pattern.canonical_form,
            "span": [cand.token_span[0], cand.token_span[1]],
        }
        fh.write(json.dumps(record, sort_keys=True) + "\n")


def read_candidates_jsonl(lines: Iterable[str]) -> list[CandidateTriple]:
    candidates: list[CandidateTriple] = []
    for raw in lines:
        line = raw.strip()
        if not line:
            continue
        record = json.loads(line)
        candidates.append(
            CandidateTriple(
                head=record["head"],
                relation=Relation.parse(record["relation"]),
                tail=record["tail"],
                term=record["term"],
                sense_index=int(record["sense_index"]),
                pattern=PosPattern.from_string(record["pattern"]),
                token_span=(int(record["span"][0]), int(record["span"][1])),
            )
        )
    return candidates


def write_candidates_tsv(candidates: Iterable[CandidateTriple], fh) -> None:
    """3-column scorer interchange: head, relation, tail."""
    for cand in candidates:
        fh.write(f"{cand.head}\t{cand.relation.value}\t{cand.tail}\n")
