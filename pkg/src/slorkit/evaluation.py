"""Correlation of fluency scores with 0-3 ratings.

Pearson r uses the numerically stable mean-centered two-pass form (the
expanded sum-of-products form loses precision); Spearman rho is emitted as
an informational extra because rank behavior helps debugging, and takes
part in no acceptance decision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence

import numpy as np

from .corpus import COMMENT_PREFIX, read_lines
from .errors import DataError
from .scorer import FluencyScore

RATINGS_FORMAT_VERSION = "v1"
REPORT_FORMAT_VERSION = "v1"


@dataclass(frozen=True)
class HumanRating:
    sentence_id: str
    score: int

    def __post_init__(self):
        if self.score not in (0, 1, 2, 3):
            raise DataError(f"rating for {self.sentence_id!r} must be 0..3, got {self.score}")


@dataclass
class CorrelationReport:
    pearson_r: float
    spearman_rho: float
    n: int
    per_label_mean_slor: Dict[int, float]
    per_label_count: Dict[int, int]
    unmatched_score_ids: List[str] = field(default_factory=list)
    unmatched_rating_ids: List[str] = field(default_factory=list)


def pearson(h: Sequence[float], f: Sequence[float]) -> float:
    """Pearson product-moment correlation; symmetric, in [-1, 1]."""
    if len(h) != len(f):
        raise ValueError(f"length mismatch: {len(h)} vs {len(f)}")
    if len(h) < 2:
        raise ValueError(f"need at least 2 samples, got {len(h)}")
    a = np.asarray(h, dtype=np.float64)
    b = np.asarray(f, dtype=np.float64)
    ac = a - a.mean()
    bc = b - b.mean()
    da = float(np.sqrt((ac * ac).sum()))
    db = float(np.sqrt((bc * bc).sum()))
    if da == 0.0 or db == 0.0:
        raise DataError("undefined correlation: constant input vector")
    return float((ac * bc).sum()) / (da * db)


def _ranks(x: Sequence[float]) -> np.ndarray:
    """1-based ranks with ties averaged."""
    a = np.asarray(x, dtype=np.float64)
    order = np.argsort(a, kind="mergesort")
    ranks = np.empty(len(a))
    ranks[order] = np.arange(1, len(a) + 1)
    _, inverse, counts = np.unique(a, return_inverse=True, return_counts=True)
    sums = np.bincount(inverse, weights=ranks)
    return sums[inverse] / counts[inverse]


def spearman(h: Sequence[float], f: Sequence[float]) -> float:
    """Rank correlation (informational; not part of any acceptance gate)."""
    if len(h) != len(f):
        raise ValueError(f"length mismatch: {len(h)} vs {len(f)}")
    return pearson(_ranks(h), _ranks(f))


def evaluate(scores: Iterable[FluencyScore], ratings: Iterable[HumanRating]) -> CorrelationReport:
    """Join scores and ratings on sentence id and correlate; unmatched ids
    on either side are reported, never silently dropped."""
    score_by_id: Dict[str, FluencyScore] = {}
    for s in scores:
        if s.sentence_id in score_by_id:
            raise DataError(f"duplicate sentence id in scores: {s.sentence_id}")
        score_by_id[s.sentence_id] = s
    rating_by_id: Dict[str, HumanRating] = {}
    for r in ratings:
        if r.sentence_id in rating_by_id:
            raise DataError(f"duplicate sentence id in ratings: {r.sentence_id}")
        rating_by_id[r.sentence_id] = r

    matched = sorted(set(score_by_id) & set(rating_by_id))
    if len(matched) < 2:
        raise DataError(f"need at least 2 matched ids to correlate, got {len(matched)}")
    h = [float(rating_by_id[i].score) for i in matched]
    f = [score_by_id[i].slor for i in matched]

    by_label: Dict[int, List[float]] = {}
    for i in matched:
        by_label.setdefault(rating_by_id[i].score, []).append(score_by_id[i].slor)
    return CorrelationReport(
        pearson_r=pearson(h, f),
        spearman_rho=spearman(h, f),
        n=len(matched),
        per_label_mean_slor={lab: sum(v) / len(v) for lab, v in sorted(by_label.items())},
        per_label_count={lab: len(v) for lab, v in sorted(by_label.items())},
        unmatched_score_ids=sorted(set(score_by_id) - set(rating_by_id)),
        unmatched_rating_ids=sorted(set(rating_by_id) - set(score_by_id)),
    )


# -- files --------------------------------------------------------------------


def write_ratings(path, ratings: Iterable[HumanRating], header: str = "") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(COMMENT_PREFIX + header + "\n")
        fh.write("id\tscore\n")
        for r in ratings:
            fh.write(f"{r.sentence_id}\t{r.score}\n")


def read_ratings(path) -> List[HumanRating]:
    lines = read_lines(path)
    if not lines or lines[0] != "id\tscore":
        raise DataError(f"{path}: not a ratings {RATINGS_FORMAT_VERSION} file")
    out = []
    for ln in lines[1:]:
        sid, score = ln.split("\t")
        out.append(HumanRating(sentence_id=sid, score=int(score)))
    return out


def format_report(report: CorrelationReport) -> str:
    """Human-readable summary followed by a machine-readable key=value
    section."""
    lines = [
        "Fluency correlation report",
        f"Pearson r between fluency scores and ratings over {report.n} matched sentences.",
        "Per-label mean fluency score should fall as the rating drops.",
        "",
        "[report]",
        f"n = {report.n}",
        f"pearson_r = {report.pearson_r:.9g}",
        f"spearman_rho = {report.spearman_rho:.9g}",
    ]
    for label in sorted(report.per_label_count, reverse=True):
        lines.append(f"label_{label}_count = {report.per_label_count[label]}")
        lines.append(f"label_{label}_mean_slor = {report.per_label_mean_slor[label]:.9g}")
    lines.append(f"unmatched_score_ids = {','.join(report.unmatched_score_ids)}")
    lines.append(f"unmatched_rating_ids = {','.join(report.unmatched_rating_ids)}")
    return "\n".join(lines) + "\n"


def write_report(path, report: CorrelationReport, header: str = "") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            fh.write(COMMENT_PREFIX + header + "\n")
        fh.write(format_report(report))
