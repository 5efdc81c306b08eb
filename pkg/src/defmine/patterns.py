"""Mining of frequent per-relation POS tag patterns from reference-KG phrases."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .corpus import Triple
from .relations import ALL_RELATIONS, Relation
from .tagging import UPOS_TAGS, TaggedToken

#: Patterns longer than this are discarded at mining time (bounds matcher work).
DEFAULT_MAX_PATTERN_LEN = 8

#: Patterns selected per relation by default.
DEFAULT_TOP_K = 15


@dataclass(frozen=True)
class PosPattern:
    """An ordered UPOS tag sequence, e.g. ("VERB", "CCONJ", "VERB", "NOUN")."""

    tags: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.tags) < 1:
            raise ValueError("pattern must have at least one tag")
        for tag in self.tags:
            if tag not in UPOS_TAGS:
                raise ValueError(f"tag {tag!r} is not a UPOS label")

    @property
    def canonical_form(self) -> str:
        return ",".join(self.tags)

    @classmethod
    def from_string(cls, canonical: str) -> "PosPattern":
        return cls(tuple(canonical.split(",")))

    def __len__(self) -> int:
        return len(self.tags)


@dataclass(frozen=True)
class PatternTable:
    """Per-relation pattern frequency lists in canonical order.

    Lists are sorted by frequency descending, ties broken by canonical form
    ascending, which makes mining order-independent.  ``k`` is None for an
    unselected table; after :func:`select_top_k` each list has length <= k.
    """

    entries: dict[Relation, tuple[tuple[PosPattern, int], ...]]
    side: str = "tail"
    k: int | None = None

    def __post_init__(self) -> None:
        if self.side not in ("head", "tail"):
            raise ValueError(f"side must be 'head' or 'tail', got {self.side!r}")
        for relation in ALL_RELATIONS:
            if relation not in self.entries:
                raise ValueError(f"pattern table missing relation {relation.value}")

    def patterns_for(self, relation: Relation) -> tuple[tuple[PosPattern, int], ...]:
        return self.entries[relation]


def _canonical_entries(counts: Counter) -> tuple[tuple[PosPattern, int], ...]:
    ordered = sorted(counts.items(), key=lambda item: (-item[1], item[0].canonical_form))
    return tuple(ordered)


def mine_patterns(
    triples: Iterable[Triple],
    tagger: Callable[[str], Sequence[TaggedToken]],
    side: str = "tail",
    max_pattern_len: int = DEFAULT_MAX_PATTERN_LEN,
) -> PatternTable:
    """Count the tag pattern of one concept slot of every triple, per relation.

    The chosen slot's phrase is tagged and its tag sequence (punctuation
    tokens ignored, so PUNCT never appears in a mined pattern) becomes one
    observation for the triple's relation.  Empty phrases and patterns longer
    than ``max_pattern_len`` contribute nothing.
    """
    if side not in ("head", "tail"):
        raise ValueError(f"side must be 'head' or 'tail', got {side!r}")
    counts: dict[Relation, Counter] = {relation: Counter() for relation in ALL_RELATIONS}
    for triple in triples:
        phrase = triple.tail if side == "tail" else triple.head
        tags = tuple(token.tag for token in tagger(phrase) if token.tag != "PUNCT")
        if not tags or len(tags) > max_pattern_len:
            continue
        counts[triple.relation][PosPattern(tags)] += 1
    entries = {relation: _canonical_entries(counter) for relation, counter in counts.items()}
    return PatternTable(entries, side=side)


def select_top_k(table: PatternTable, k: int = DEFAULT_TOP_K) -> PatternTable:
    """Keep the first k patterns per relation under the canonical ordering."""
    if k < 0:
        raise ValueError("k must be >= 0")
    selected = {relation: entries[:k] for relation, entries in table.entries.items()}
    return PatternTable(selected, side=table.side, k=k)


def write_pattern_table(table: PatternTable, fh) -> None:
    """Persist as ``relation<TAB>canonical_form<TAB>frequency`` rows.

    A comment header keeps the side/k metadata so the file is fully
    re-loadable.
    """
    k_text = "" if table.k is None else str(table.k)
    fh.write(f"# side={table.side} k={k_text}\n")
    for relation in ALL_RELATIONS:
        for pattern, frequency in table.entries[relation]:
            fh.write(f"{relation.value}\t{pattern.canonical_form}\t{frequency}\n")


def read_pattern_table(lines: Iterable[str]) -> PatternTable:
    side = "tail"
    k: int | None = None
    raw_entries: dict[Relation, list[tuple[PosPattern, int]]] = {
        relation: [] for relation in ALL_RELATIONS
    }
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        if line.startswith("#"):
            for part in line[1:].split():
                key, _, value = part.partition("=")
                if key == "side" and value:
                    side = value
                elif key == "k" and value:
                    k = int(value)
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise ValueError(f"pattern table line {lineno}: expected 3 columns")
        relation = Relation.parse(cols[0])
        raw_entries[relation].append((PosPattern.from_string(cols[1]), int(cols[2])))
    entries = {
        relation: _canonical_entries(Counter(dict(items)))
        for relation, items in raw_entries.items()
    }
    return PatternTable(entries, side=side, k=k)
