"""Plausibility scoring, negative sampling, ranking, selection and sampling.

Three scorer families share one :class:`ScoreRecord` shape: the native
bilinear model, the PMI combiner over externally computed conditional
log-probabilities, and external calibrated score files.  Calibrated scorers
emit values in [0, 1]; the PMI combiner is uncalibrated.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._kernels import bilinear_forms
from .bilinear import BilinearModel, bilinear_form, encode_term, sigmoid, sigmoid_array
from .corpus import Triple
from .extraction import CandidateTriple
from .relations import Relation, UnknownRelationError

#: Attempts per negative before giving up on a pathological vocabulary.
NEGATIVE_REDRAW_LIMIT = 1000


@dataclass(frozen=True)
class ScoreRecord:
    """(triple key, scorer, score).  Calibrated scorers keep score in [0, 1]."""

    triple_key: tuple[str, str, str]
    scorer_id: str
    score: float


@dataclass(frozen=True)
class PmiComponents:
    """Conditional log-probabilities (natural log) for both PMI directions."""

    logp_t_given_hr: float
    logp_t_given_r: float
    logp_h_given_tr: float
    logp_h_given_r: float

    def values(self) -> tuple[float, float, float, float]:
        return (
            self.logp_t_given_hr,
            self.logp_t_given_r,
            self.logp_h_given_tr,
            self.logp_h_given_r,
        )


@dataclass(frozen=True)
class SelectionCriterion:
    """Qualification rule: score >= theta (inclusive) or the top N entries."""

    mode: str
    theta: float = 0.9
    top_n: int = 1000

    def __post_init__(self) -> None:
        if self.mode not in ("threshold", "top_n"):
            raise ValueError(f"mode must be 'threshold' or 'top_n', got {self.mode!r}")
        if not 0.0 <= self.theta <= 1.0:
            raise ValueError("theta must be within [0, 1]")
        if self.top_n < 0:
            raise ValueError("top_n must be >= 0")

    @classmethod
    def threshold(cls, theta: float = 0.9) -> "SelectionCriterion":
        return cls(mode="threshold", theta=theta)

    @classmethod
    def top(cls, n: int = 1000) -> "SelectionCriterion":
        return cls(mode="top_n", top_n=n)


@dataclass
class ParsedScores:
    records: list[ScoreRecord]
    skipped: Counter
    total_rows: int


def bilinear_score(
    t1: str, relation: Relation, t2: str, model: BilinearModel, scorer_id: str = "bilinear"
) -> ScoreRecord:
    """sigmoid(u1^T M_R u2); exactly 0.5 iff the bilinear form is zero."""
    raw = bilinear_form(t1, relation, t2, model)
    return ScoreRecord((t1, relation.value, t2), scorer_id, sigmoid(raw))


def score_candidates_bilinear(
    candidates: Sequence[CandidateTriple],
    model: BilinearModel,
    scorer_id: str = "bilinear",
) -> list[ScoreRecord]:
    """Batch-score candidates, reusing term encodings and the batched kernel."""
    encodings: dict[str, np.ndarray] = {}

    def encoding(text: str) -> np.ndarray:
        u = encodings.get(text)
        if u is None:
            u = encode_term(text, model).u
            encodings[text] = u
        return u

    records: list[ScoreRecord] = [None] * len(candidates)  # type: ignore[list-item]
    by_relation: dict[Relation, list[int]] = {}
    for index, cand in enumerate(candidates):
        by_relation.setdefault(cand.relation, []).append(index)
    for relation, indices in by_relation.items():
        u1 = np.stack([encoding(candidates[i].head) for i in indices])
        u2 = np.stack([encoding(candidates[i].tail) for i in indices])
        scores = sigmoid_array(bilinear_forms(u1, model.relation_matrices[relation], u2))
        for position, i in enumerate(indices):
            cand = candidates[i]
            records[i] = ScoreRecord(cand.key(), scorer_id, float(scores[position]))
    return records


def pmi_combine(components: PmiComponents) -> float:
    """Average of forward and backward PMI from the four log-probabilities."""
    values = components.values()
    if not all(math.isfinite(v) for v in values):
        raise ValueError("PMI components must be finite")
    forward = components.logp_t_given_hr - components.logp_t_given_r
    backward = components.logp_h_given_tr - components.logp_h_given_r
    return (forward + backward) / 2.0


def pmi_score(
    components: PmiComponents,
    triple_key: tuple[str, str, str],
    scorer_id: str = "pmi",
) -> ScoreRecord:
    return ScoreRecord(triple_key, scorer_id, pmi_combine(components))


def ingest_external_scores(
    lines: Iterable[str], scorer_id: str, calibrated: bool
) -> ParsedScores:
    """Parse score rows: 4 columns (direct score) or 7 (PMI log-prob quad).

    Calibrated scores outside [0, 1], unknown relations and malformed rows are
    rejected under named counters, never fatally.
    """
    records: list[ScoreRecord] = []
    skipped: Counter = Counter()
    total = 0
    for raw in lines:
        total += 1
        line = raw.rstrip("\n")
        if not line.strip():
            skipped["blank"] += 1
            continue
        cols = line.split("\t")
        if len(cols) not in (4, 7):
            skipped["malformed"] += 1
            continue
        head, rel_label, tail = cols[0], cols[1], cols[2]
        if not head.strip() or not tail.strip():
            skipped["malformed"] += 1
            continue
        try:
            relation = Relation.parse(rel_label)
        except UnknownRelationError:
            skipped["relation"] += 1
            continue
        key = (head, relation.value, tail)
        if len(cols) == 4:
            try:
                score = float(cols[3])
            except ValueError:
                skipped["malformed"] += 1
                continue
            if not math.isfinite(score):
                skipped["malformed"] += 1
                continue
            if calibrated and not 0.0 <= score <= 1.0:
                skipped["range"] += 1
                continue
            records.append(ScoreRecord(key, scorer_id, score))
        else:
            try:
                values = [float(x) for x in cols[3:]]
                components = PmiComponents(*values)
                records.append(pmi_score(components, key, scorer_id))
            except ValueError:
                skipped["malformed"] += 1
                continue
    return ParsedScores(records, skipped, total)


def generate_negative_triples(
    positives: Iterable[Triple],
    count: int,
    seed: int,
    max_attempts: int = NEGATIVE_REDRAW_LIMIT,
) -> list[Triple]:
    """Corrupt one uniformly chosen slot of uniformly chosen positives.

    Corruptions that collide with an existing positive are redrawn (so every
    output differs from its source triple in exactly one slot and is never a
    known positive).  Deterministic for a fixed seed; the origin triple and
    corrupted slot are recorded in the provenance tag.
    """
    positive_list = sorted(set(positives), key=lambda t: (t.relation.value, t.head, t.tail))
    if not positive_list:
        raise ValueError("need at least one positive triple")
    entities = sorted({t.head for t in positive_list} | {t.tail for t in positive_list})
    if len(entities) < 2:
        raise ValueError("entity vocabulary of size 1 admits no valid corruption")
    positive_keys = {(t.head, t.relation, t.tail) for t in positive_list}
    rng = random.Random(seed)
    negatives: list[Triple] = []
    for _ in range(count):
        for _attempt in range(max_attempts):
            origin = positive_list[rng.randrange(len(positive_list))]
            corrupt_head = rng.randrange(2) == 0
            replacement = entities[rng.randrange(len(entities))]
            if corrupt_head:
                key = (replacement, origin.relation, origin.tail)
                slot = "head"
            else:
                key = (origin.head, origin.relation, replacement)
                slot = "tail"
            if key in positive_keys:
                continue
            negatives.append(
                Triple(
                    key[0],
                    key[1],
                    key[2],
                    source=f"neg:{slot}:{origin.head}|{origin.relation.value}|{origin.tail}",
                    confidence=0.0,
                )
            )
            break
        else:
            raise ValueError(
                f"no valid corruption found after {max_attempts} attempts"
            )
    return negatives


def rank_candidates(records: Sequence[ScoreRecord], relation: Relation) -> list[ScoreRecord]:
    """Descending by score, ties by (head, tail) ascending; a stable permutation."""
    scorers = {record.scorer_id for record in records}
    if len(scorers) > 1:
        raise ValueError(f"mixed scorer ids in ranking input: {sorted(scorers)}")
    subset = [record for record in records if record.triple_key[1] == relation.value]
    return sorted(
        subset, key=lambda r: (-r.score, r.triple_key[0], r.triple_key[2])
    )


def select_qualified(
    ranking: Sequence[ScoreRecord], criterion: SelectionCriterion
) -> list[ScoreRecord]:
    """Threshold mode keeps score >= theta (inclusive); top_n keeps the first N."""
    if criterion.mode == "threshold":
        return [record for record in ranking if record.score >= criterion.theta]
    return list(ranking[: criterion.top_n])


def sample_for_evaluation(
    qualified: Sequence[ScoreRecord], n: int = 50, seed: int = 0
) -> list[ScoreRecord]:
    """Uniform sample without replacement, returned in ranking order."""
    if n < 0:
        raise ValueError("sample size must be >= 0")
    k = min(n, len(qualified))
    rng = random.Random(seed)
    indices = sorted(rng.sample(range(len(qualified)), k))
    return [qualified[i] for i in indices]


# ---------------------------------------------------------------------------
# Interchange files


def write_scores_tsv(records: Iterable[ScoreRecord], fh) -> None:
    """Score interchange rows ``head<TAB>relation<TAB>tail<TAB>score``."""
    for record in records:
        head, relation_label, tail = record.triple_key
        fh.write(f"{head}\t{relation_label}\t{tail}\t{repr(record.score)}\n")


def read_scores_tsv(lines: Iterable[str], scorer_id: str, calibrated: bool) -> ParsedScores:
    return ingest_external_scores(lines, scorer_id, calibrated)


def write_negatives_tsv(negatives: Iterable[Triple], fh) -> None:
    """Training-set format with confidence 0: the feed for external training."""
    for triple in negatives:
        fh.write(f"{triple.relation.value}\t{triple.head}\t{triple.tail}\t0\n")
