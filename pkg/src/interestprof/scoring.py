"""Image-level topic scoring: probability-based and occurrence-based rows.

Each prediction record becomes two length-24 rows. The probability row sums
classifier probabilities per topic; the occurrence row counts how many of the
top-k labels map to each topic and divides by k (the configured top-k, not the
record length, so short records lose mass to ``unmapped``). Mass belonging to
labels with no topic ancestor is tracked in ``unmapped_mass`` instead of being
renormalized away, so coverage gaps of the taxonomy stay visible downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .ingest import DEFAULT_TOP_K, PredictionRecord
from .taxonomy import N_TOPICS, TOPICS, Taxonomy, topic_of_instance


@dataclass(frozen=True)
class TopicDistribution:
    """Nonnegative scores indexed by the canonical topic order."""

    scores: tuple[float, ...]
    unmapped_mass: float = 0.0

    def __post_init__(self):
        if len(self.scores) != N_TOPICS:
            raise ValueError(f"expected {N_TOPICS} topic scores, got {len(self.scores)}")
        if any(s < 0 for s in self.scores) or self.unmapped_mass < 0:
            raise ValueError("topic scores and unmapped mass must be nonnegative")

    def total(self) -> float:
        return sum(self.scores) + self.unmapped_mass

    def topic_score(self, topic: str) -> float:
        return self.scores[TOPICS.index(topic)]

    def as_dict(self) -> dict[str, float]:
        d = {name: self.scores[i] for i, name in enumerate(TOPICS)}
        d["unmapped"] = self.unmapped_mass
        return d

    def nonzero(self) -> dict[str, float]:
        return {name: s for name, s in zip(TOPICS, self.scores) if s > 0}


@dataclass(frozen=True)
class ImageLevelMatrices:
    """Per-image topic rows for one user, aligned with image_ids."""

    image_ids: tuple[str, ...]
    prob_rows: tuple[TopicDistribution, ...]
    occ_rows: tuple[TopicDistribution, ...]

    def __post_init__(self):
        if not (len(self.image_ids) == len(self.prob_rows) == len(self.occ_rows)):
            raise ValueError("image_ids, prob_rows and occ_rows must have equal length")

    def n_images(self) -> int:
        return len(self.image_ids)


def score_image_prob(record: PredictionRecord, tax: Taxonomy) -> TopicDistribution:
    """Probability scoring: per-topic sum of prediction probabilities.

    Sums use math.fsum, so the result is exactly invariant to prediction order.
    """
    per_topic: dict[int, list[float]] = {}
    unmapped: list[float] = []
    for label, prob in record.predictions:
        topic = topic_of_instance(tax, label)
        if topic is None:
            unmapped.append(prob)
        else:
            per_topic.setdefault(TOPICS.index(topic), []).append(prob)
    scores = [0.0] * N_TOPICS
    for i, values in per_topic.items():
        scores[i] = math.fsum(values)
    return TopicDistribution(scores=tuple(scores), unmapped_mass=math.fsum(unmapped))


def score_image_occ(record: PredictionRecord, tax: Taxonomy, k: int = DEFAULT_TOP_K) -> TopicDistribution:
    """Occurrence scoring: per-topic label counts over a fixed divisor k."""
    if k < len(record.predictions):
        raise ValueError(
            f"divisor k={k} is smaller than the record's {len(record.predictions)} predictions"
        )
    counts = [0] * N_TOPICS
    unmapped_count = k - len(record.predictions)
    for label, _ in record.predictions:
        topic = topic_of_instance(tax, label)
        if topic is None:
            unmapped_count += 1
        else:
            counts[TOPICS.index(topic)] += 1
    return TopicDistribution(
        scores=tuple(c / k for c in counts),
        unmapped_mass=unmapped_count / k,
    )


def build_matrices(
    records: list[PredictionRecord], tax: Taxonomy, k: int = DEFAULT_TOP_K
) -> ImageLevelMatrices:
    """Score every record of one user, preserving record order."""
    users = {rec.user_id for rec in records}
    if len(users) > 1:
        raise ValueError(f"records span multiple users: {sorted(users)}")
    return ImageLevelMatrices(
        image_ids=tuple(rec.image_id for rec in records),
        prob_rows=tuple(score_image_prob(rec, tax) for rec in records),
        occ_rows=tuple(score_image_occ(rec, tax, k) for rec in records),
    )
