"""Parsers for reference-KG dumps, training triples and definition corpora.

All parsers are line-oriented, deterministic and non-fatal on bad rows: every
input row is either parsed or skipped under a named reason, so
``len(parsed) + skipped.total() == total_rows`` always holds.  Canonical
writers/readers round-trip their collections exactly.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .relations import Relation, UnknownRelationError

log = logging.getLogger(__name__)

#: Lowercased gloss substrings that mark a morphology-only definition.
MORPHOLOGY_MARKERS = (
    "plural of",
    "alternative form of",
    "alternative spelling of",
    "misspelling of",
)


def is_morphological(definition_text: str) -> bool:
    """True iff the gloss only describes morphology (plural, spelling variant...)."""
    lowered = definition_text.lower()
    return any(marker in lowered for marker in MORPHOLOGY_MARKERS)


@dataclass(frozen=True)
class Triple:
    """A (head, relation, tail) assertion with provenance.

    Surface text is kept verbatim (case preserved); use :attr:`head_norm` /
    :attr:`tail_norm` for the lowercase forms.  ``confidence`` is provenance
    metadata and excluded from equality so canonical TSV round-trips compare
    equal.
    """

    head: str
    relation: Relation
    tail: str
    source: str = ""
    confidence: float | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not self.head.strip():
            raise ValueError("triple head is empty")
        if not self.tail.strip():
            raise ValueError("triple tail is empty")

    @property
    def head_norm(self) -> str:
        return self.head.lower()

    @property
    def tail_norm(self) -> str:
        return self.tail.lower()

    def key(self) -> tuple[str, str, str]:
        """(head, relation label, tail) identity used across scorers and reports."""
        return (self.head, self.relation.value, self.tail)


@dataclass(frozen=True)
class TermDefinition:
    """One gloss of a dictionary term.

    ``sense_index`` is the 0-based ordinal of the gloss within the term's
    retained entries; ``(term, sense_index)`` is unique within a corpus.
    """

    term: str
    sense_index: int
    definition_text: str
    source_id: str

    def __post_init__(self) -> None:
        if not self.definition_text.strip():
            raise ValueError("definition text is empty")
        if self.sense_index < 0:
            raise ValueError("sense_index must be >= 0")


@dataclass
class ParsedTriples:
    """Triples plus per-reason skip counts; conservation is checkable."""

    triples: list[Triple]
    skipped: Counter
    total_rows: int

    @property
    def skipped_total(self) -> int:
        return sum(self.skipped.values())


@dataclass
class ParsedDefinitions:
    definitions: list[TermDefinition]
    skipped: Counter
    total_rows: int

    @property
    def skipped_total(self) -> int:
        return sum(self.skipped.values())


class FormatError(ValueError):
    """A canonical file failed strict parsing; message names the line."""


def _decode_concept(uri: str) -> tuple[str, str] | None:
    """Split a ``/c/<lang>/<text>[/...]`` concept URI into (lang, surface text)."""
    parts = uri.split("/")
    if len(parts) < 4 or parts[0] != "" or parts[1] != "c":
        return None
    lang = parts[2]
    text = parts[3].replace("_", " ").strip()
    if not lang or not text:
        return None
    return lang, text


def parse_kg_dump(
    lines: Iterable[str],
    language: str = "en",
    metadata_filter: str | None = None,
    source_name: str = "kg",
) -> ParsedTriples:
    """Parse ConceptNet-style assertion rows into :class:`Triple` objects.

    Rows are tab-separated ``(assertion URI, relation URI, start URI, end URI,
    metadata...)``.  Only rows whose start and end concepts carry ``language``
    and whose relation is one of the twelve targets are kept; everything else
    is skipped under a named reason.  ``metadata_filter``, when given, keeps
    only rows whose metadata column contains that substring (the hook for
    source-specific sub-corpora).
    """
    triples: list[Triple] = []
    skipped: Counter = Counter()
    total = 0
    for lineno, raw in enumerate(lines, start=1):
        total += 1
        line = raw.rstrip("\n")
        if not line.strip():
            skipped["blank"] += 1
            continue
        cols = line.split("\t")
        if len(cols) < 4:
            skipped["malformed"] += 1
            continue
        rel_uri = cols[1]
        if not rel_uri.startswith("/r/"):
            skipped["malformed"] += 1
            continue
        try:
            relation = Relation.parse(rel_uri[len("/r/"):])
        except UnknownRelationError:
            skipped["relation"] += 1
            continue
        start = _decode_concept(cols[2])
        end = _decode_concept(cols[3])
        if start is None or end is None:
            skipped["malformed"] += 1
            continue
        if start[0] != language or end[0] != language:
            skipped["language"] += 1
            continue
        if metadata_filter is not None:
            metadata = cols[4] if len(cols) > 4 else ""
            if metadata_filter not in metadata:
                skipped["metadata"] += 1
                continue
        triples.append(
            Triple(start[1], relation, end[1], source=f"{source_name}:{lineno}")
        )
    if total and not triples:
        log.warning("parse_kg_dump: no triples parsed from %d rows", total)
    return ParsedTriples(triples, skipped, total)


def load_training_triples(lines: Iterable[str], source_name: str = "train") -> ParsedTriples:
    """Parse positive training rows ``relation<TAB>head<TAB>tail<TAB>confidence``."""
    triples: list[Triple] = []
    skipped: Counter = Counter()
    total = 0
    for lineno, raw in enumerate(lines, start=1):
        total += 1
        line = raw.rstrip("\n")
        if not line.strip():
            skipped["blank"] += 1
            continue
        cols = line.split("\t")
        if len(cols) != 4:
            skipped["malformed"] += 1
            continue
        rel_label, head, tail, conf_text = cols
        try:
            relation = Relation.parse(rel_label)
        except UnknownRelationError:
            skipped["relation"] += 1
            continue
        if not head.strip() or not tail.strip():
            skipped["malformed"] += 1
            continue
        try:
            confidence = float(conf_text)
        except ValueError:
            skipped["malformed"] += 1
            continue
        triples.append(
            Triple(
                head.strip(),
                relation,
                tail.strip(),
                source=f"{source_name}:{lineno}",
                confidence=confidence,
            )
        )
    if total and not triples:
        log.warning("load_training_triples: no triples parsed from %d rows", total)
    return ParsedTriples(triples, skipped, total)


def load_definitions(
    lines: Iterable[str],
    fmt: str = "jsonl",
    term_whitelist: Iterable[str] | None = None,
) -> ParsedDefinitions:
    """Load (term, gloss) records into :class:`TermDefinition` objects.

    ``fmt`` is ``jsonl`` (one object per line with ``term``/``gloss`` fields,
    ``pos`` optional) or ``tsv`` (3 columns: term, pos, gloss).  Morphology
    glosses are dropped, duplicate (term, gloss) records keep the first
    occurrence, and when a whitelist is given, terms outside it (compared
    lowercased) are dropped.  ``sense_index`` numbers the retained glosses of
    each term in input order.
    """
    if fmt not in ("jsonl", "tsv"):
        raise ValueError(f"unknown definitions format: {fmt!r}")
    whitelist = (
        {term.lower() for term in term_whitelist} if term_whitelist is not None else None
    )
    definitions: list[TermDefinition] = []
    skipped: Counter = Counter()
    total = 0
    seen: set[tuple[str, str]] = set()
    sense_counter: Counter = Counter()
    for raw in lines:
        total += 1
        line = raw.rstrip("\n")
        if not line.strip():
            skipped["blank"] += 1
            continue
        term, gloss = "", ""
        if fmt == "jsonl":
            try:
                record = json.loads(line)
            except json.JSONDecodeError:
                skipped["malformed"] += 1
                continue
            if not isinstance(record, dict):
                skipped["malformed"] += 1
                continue
            term = str(record.get("term", "") or "")
            gloss = str(record.get("gloss", "") or "")
        else:
            cols = line.split("\t")
            if len(cols) != 3:
                skipped["malformed"] += 1
                continue
            term, _pos, gloss = cols
        term = term.strip()
        gloss = gloss.strip()
        if not term or not gloss:
            skipped["malformed"] += 1
            continue
        if whitelist is not None and term.lower() not in whitelist:
            skipped["whitelist"] += 1
            continue
        if is_morphological(gloss):
            skipped["morphology"] += 1
            continue
        if (term, gloss) in seen:
            skipped["duplicate"] += 1
            continue
        seen.add((term, gloss))
        index = sense_counter[term]
        sense_counter[term] += 1
        definitions.append(
            TermDefinition(term, index, gloss, source_id=f"{term}#{index}")
        )
    return ParsedDefinitions(definitions, skipped, total)


# ---------------------------------------------------------------------------
# Canonical file formats


def write_triples_tsv(triples: Iterable[Triple], fh) -> None:
    """Write the canonical ``relation<TAB>head<TAB>tail<TAB>source`` rows."""
    for triple in triples:
        fh.write(f"{triple.relation.value}\t{triple.head}\t{triple.tail}\t{triple.source}\n")


def read_triples_tsv(lines: Iterable[str]) -> list[Triple]:
    """Strictly re-parse the canonical triple TSV (errors name the line)."""
    triples: list[Triple] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line:
            continue
        cols = line.split("\t")
        if len(cols) != 4:
            raise FormatError(f"triple TSV line {lineno}: expected 4 columns, got {len(cols)}")
        try:
            relation = Relation.parse(cols[0])
        except UnknownRelationError as exc:
            raise FormatError(f"triple TSV line {lineno}: {exc}") from None
        triples.append(Triple(cols[1], relation, cols[2], source=cols[3]))
    return triples


def write_definitions_tsv(definitions: Iterable[TermDefinition], fh) -> None:
    """Write the canonical ``term<TAB>sense_index<TAB>gloss`` rows."""
    for definition in definitions:
        fh.write(f"{definition.term}\t{definition.sense_index}\t{definition.definition_text}\n")


def read_definitions_tsv(lines: Iterable[str]) -> list[TermDefinition]:
    definitions: list[TermDefinition] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n")
        if not line:
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise FormatError(
                f"definitions TSV line {lineno}: expected 3 columns, got {len(cols)}"
            )
        term, sense_text, gloss = cols
        try:
            sense_index = int(sense_text)
        except ValueError:
            raise FormatError(f"definitions TSV line {lineno}: bad sense index") from None
        definitions.append(
            TermDefinition(term, sense_index, gloss, source_id=f"{term}#{sense_index}")
        )
    return definitions
