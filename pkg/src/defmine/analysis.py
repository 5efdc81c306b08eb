"""Score distributions, scorer rank agreement and evaluation summaries."""

from __future__ import annotations

import csv
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._kernels import count_inversions
from .relations import Relation
from .scoring import ScoreRecord


@dataclass(frozen=True)
class Histogram:
    """Equal-width bins over [lo, hi]; the last bin is right-closed."""

    lo: float
    hi: float
    counts: tuple[int, ...]
    out_of_range: int

    @property
    def bin_count(self) -> int:
        return len(self.counts)

    @property
    def edges(self) -> list[tuple[float, float]]:
        width = (self.hi - self.lo) / self.bin_count
        return [
            (self.lo + i * width, self.lo + (i + 1) * width) for i in range(self.bin_count)
        ]


def histogram(
    scores: Sequence[float],
    bin_count: int = 10,
    value_range: tuple[float, float] | None = None,
) -> Histogram:
    """Bin scores; out-of-range values are counted separately, never dropped.

    With no explicit range the data's (min, max) is used (empty input is then
    an error; a degenerate all-equal range is widened by 1 so binning stays
    defined).
    """
    if bin_count < 1:
        raise ValueError("bin_count must be >= 1")
    data = np.asarray(scores, dtype=np.float64)
    if value_range is None:
        if data.size == 0:
            raise ValueError("cannot derive a histogram range from no data")
        lo, hi = float(data.min()), float(data.max())
        if lo == hi:
            hi = lo + 1.0
    else:
        lo, hi = float(value_range[0]), float(value_range[1])
        if not lo < hi:
            raise ValueError("histogram range must satisfy lo < hi")
    counts = [0] * bin_count
    out_of_range = 0
    span = hi - lo
    for s in data:
        if s < lo or s > hi:
            out_of_range += 1
            continue
        index = int(math.floor((s - lo) * bin_count / span))
        if index >= bin_count:  # s == hi: right-closed last bin
            index = bin_count - 1
        counts[index] += 1
    return Histogram(lo=lo, hi=hi, counts=tuple(counts), out_of_range=out_of_range)


def _tie_pair_count(sorted_values: np.ndarray) -> int:
    total = 0
    run = 1
    for i in range(1, sorted_values.size):
        if sorted_values[i] == sorted_values[i - 1]:
            run += 1
        else:
            total += run * (run - 1) // 2
            run = 1
    total += run * (run - 1) // 2
    return total


def _joint_tie_pair_count(xs: np.ndarray, ys: np.ndarray) -> int:
    total = 0
    run = 1
    for i in range(1, xs.size):
        if xs[i] == xs[i - 1] and ys[i] == ys[i - 1]:
            run += 1
        else:
            total += run * (run - 1) // 2
            run = 1
    total += run * (run - 1) // 2
    return total


def tau_b(x: Sequence[float], y: Sequence[float]) -> float:
    """Tie-corrected Kendall's tau over paired values.

    Computed exactly via inversion counting (Knight's method); raises when a
    side is constant (tau-b undefined).
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be equal-length 1-d sequences")
    n = x.size
    if n < 2:
        raise ValueError("tau needs at least 2 paired observations")
    order = np.lexsort((y, x))
    xs, ys = x[order], y[order]
    n0 = n * (n - 1) // 2
    n1 = _tie_pair_count(xs)
    n2 = _tie_pair_count(np.sort(y))
    n3 = _joint_tie_pair_count(xs, ys)
    swaps = count_inversions(ys)
    concordant_minus_discordant = n0 - n1 - n2 + n3 - 2 * swaps
    denominator = math.sqrt(float(n0 - n1) * float(n0 - n2))
    if denominator == 0.0:
        raise ValueError("tau-b is undefined for a constant score list")
    return concordant_minus_discordant / denominator


def kendall_tau(a: Sequence[ScoreRecord], b: Sequence[ScoreRecord]) -> float:
    """Tau-b over the intersection of triple keys scored by both sides."""
    scores_a = {record.triple_key: record.score for record in a}
    scores_b = {record.triple_key: record.score for record in b}
    shared = sorted(set(scores_a) & set(scores_b))
    if len(shared) < 2:
        raise ValueError(
            f"scorers share only {len(shared)} triples; tau needs at least 2"
        )
    x = [scores_a[key] for key in shared]
    y = [scores_b[key] for key in shared]
    return tau_b(x, y)


def kendall_tau_matrix(
    records_by_scorer: Mapping[str, Sequence[ScoreRecord]],
) -> dict[tuple[str, str], float | None]:
    """Pairwise tau over all scorer pairs; None marks undefined pairs."""
    matrix: dict[tuple[str, str], float | None] = {}
    scorers = sorted(records_by_scorer)
    for i, first in enumerate(scorers):
        for second in scorers[i + 1:]:
            try:
                tau = kendall_tau(records_by_scorer[first], records_by_scorer[second])
            except ValueError:
                tau = None
            matrix[(first, second)] = tau
    return matrix


# ---------------------------------------------------------------------------
# Human-evaluation summaries (the validity / validity-and-novelty table)


@dataclass(frozen=True)
class AnnotationLabel:
    triple_key: tuple[str, str, str]
    relation: Relation
    scorer_id: str
    valid: bool
    novel: bool


@dataclass(frozen=True)
class SummaryCell:
    relation: Relation
    scorer_id: str
    sample_size: int
    labeled: int
    validity: float
    valid_and_novel: float
    qualified_count: int | None = None


@dataclass
class EvaluationSummary:
    cells: list[SummaryCell]
    rejected: Counter

    def cell(self, relation: Relation, scorer_id: str) -> SummaryCell | None:
        for cell in self.cells:
            if cell.relation is relation and cell.scorer_id == scorer_id:
                return cell
        return None


def summarize_annotations(
    labels: Sequence[AnnotationLabel],
    samples: Mapping[tuple[Relation, str], Sequence[tuple[str, str, str]]],
    qualified_counts: Mapping[tuple[Relation, str], int] | None = None,
) -> EvaluationSummary:
    """Per-(relation, scorer) validity proportions over registered samples.

    V. = valid / sample size, V.N. = (valid and novel) / sample size.  Labels
    for triples outside the registered sample are rejected (counted, not
    fatal); repeated labels for one triple keep the last (resubmission
    semantics).
    """
    registered: dict[tuple[Relation, str], set] = {
        cell_key: set(keys) for cell_key, keys in samples.items()
    }
    effective: dict[tuple[Relation, str], dict] = {key: {} for key in samples}
    rejected: Counter = Counter()
    for label in labels:
        cell_key = (label.relation, label.scorer_id)
        if cell_key not in registered or label.triple_key not in registered[cell_key]:
            rejected["unregistered"] += 1
            continue
        effective[cell_key][label.triple_key] = label
    cells: list[SummaryCell] = []
    for cell_key in sorted(samples, key=lambda ck: (ck[0].value, ck[1])):
        relation, scorer_id = cell_key
        sample_size = len(samples[cell_key])
        chosen = effective[cell_key]
        valid = sum(1 for label in chosen.values() if label.valid)
        valid_novel = sum(1 for label in chosen.values() if label.valid and label.novel)
        qualified = qualified_counts.get(cell_key) if qualified_counts else None
        cells.append(
            SummaryCell(
                relation=relation,
                scorer_id=scorer_id,
                sample_size=sample_size,
                labeled=len(chosen),
                validity=valid / sample_size if sample_size else 0.0,
                valid_and_novel=valid_novel / sample_size if sample_size else 0.0,
                qualified_count=qualified,
            )
        )
    return EvaluationSummary(cells=cells, rejected=rejected)


def estimate_valid_count(qualified_count: int, validity_proportion: float) -> float:
    """qualified x validity, computed decimal-faithfully.

    The proportion is interpreted at its shortest decimal representation so
    that e.g. 50000 x 0.34 yields exactly 17000 rather than a binary-float
    artifact.
    """
    if not 0.0 <= validity_proportion <= 1.0:
        raise ValueError("validity proportion must be within [0, 1]")
    return float(Fraction(str(validity_proportion)) * qualified_count)


# ---------------------------------------------------------------------------
# CSV emitters


def write_histogram_csv(hist: Histogram, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["bin_lo", "bin_hi", "count"])
    for (lo, hi), count in zip(hist.edges, hist.counts):
        writer.writerow([repr(lo), repr(hi), count])


def write_tau_matrix_csv(matrix: Mapping[tuple[str, str], float | None], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["scorer_a", "scorer_b", "tau"])
    for (first, second) in sorted(matrix):
        tau = matrix[(first, second)]
        writer.writerow([first, second, "n/a" if tau is None else repr(tau)])


def write_summary_csv(summary: EvaluationSummary, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["Relation", "scorer", "Qual.", "V.", "V.N."])
    for cell in summary.cells:
        writer.writerow(
            [
                cell.relation.value,
                cell.scorer_id,
                "" if cell.qualified_count is None else cell.qualified_count,
                repr(cell.validity),
                repr(cell.valid_and_novel),
            ]
        )


def write_estimates_csv(
    estimates: Iterable[tuple[str, str, int, float, float]], fh
) -> None:
    """Rows of (relation, scorer, qualified, validity, estimated valid count)."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["Relation", "scorer", "qualified", "validity", "estimated_valid"])
    for relation_label, scorer_id, qualified, validity, estimate in estimates:
        writer.writerow([relation_label, scorer_id, qualified, repr(validity), repr(estimate)])
