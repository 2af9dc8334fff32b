"""Evaluation harness: accuracy sweep, precision/recall, confusion, CMC, ROC data.

All measures compare the predicted topic (argmax of a user vector) against the
user's self-assessed topic. The accuracy sweep runs over prefix sizes of each
user's image list; confusion, precision/recall, CMC and ROC are computed at
the largest sweep point.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import EmptyInputError
from .profiling import MECHANISMS, UserProfile, argmax_topics
from .scoring import TopicDistribution
from .taxonomy import N_TOPICS, TOPICS


@dataclass
class EvalReport:
    mechanism: str
    sweep: tuple[int, ...]
    n_labeled: int
    per_topic_accuracy: dict[str, dict[int, float | None]]
    overall_accuracy: dict[int, float]
    overall_accuracy_by_mechanism: dict[str, dict[int, float]]
    precision: dict[str, float]
    recall: dict[str, float]
    undefined_precision: tuple[str, ...]
    undefined_recall: tuple[str, ...]
    confusion: tuple[tuple[int, ...], ...]  # rows: self-assessed, cols: predicted
    cmc: tuple[tuple[int, float], ...]      # (rank, fraction matched at or below)
    roc_points: dict[str, tuple[tuple[float, float, float], ...]]  # (threshold, fpr, tpr)


def _predicted_or_none(v: TopicDistribution) -> str | None:
    best = argmax_topics(v)
    return best[0] if best else None


def label_rank(v: TopicDistribution, topic: str) -> int:
    """1-based rank of a topic by descending score; tied topics share the best rank."""
    own = v.scores[TOPICS.index(topic)]
    return 1 + sum(1 for s in v.scores if s > own)


def cmc_curve(
    profiles: Sequence[UserProfile],
    labels: Mapping[str, str],
    mechanism: str = "occ",
) -> tuple[tuple[int, float], ...]:
    """Fraction of labeled users whose true topic ranks within the top r, r=1..24."""
    ranks = [
        label_rank(p.vector(mechanism), labels[p.user_id])
        for p in profiles
        if p.user_id in labels
    ]
    if not ranks:
        raise EmptyInputError("cmc_curve needs at least one labeled user")
    n = len(ranks)
    return tuple(
        (r, sum(1 for rank in ranks if rank <= r) / n) for r in range(1, N_TOPICS + 1)
    )


def roc_series(
    scores: Sequence[float], positives: Sequence[bool]
) -> tuple[tuple[float, float, float], ...]:
    """One-vs-rest ROC points from a descending threshold sweep over the scores.

    Each point is (threshold, fpr, tpr) for the rule ``score >= threshold``.
    Empty positive or negative sets contribute 0 rates.
    """
    n_pos = sum(positives)
    n_neg = len(positives) - n_pos
    points = []
    for th in sorted(set(scores), reverse=True):
        tp = sum(1 for s, pos in zip(scores, positives) if pos and s >= th)
        fp = sum(1 for s, pos in zip(scores, positives) if not pos and s >= th)
        points.append(
            (th, fp / n_neg if n_neg else 0.0, tp / n_pos if n_pos else 0.0)
        )
    return tuple(points)


def evaluate(
    profiles_by_k: Mapping[int, Sequence[UserProfile]],
    labels: Mapping[str, str],
    mechanism: str = "occ",
) -> EvalReport:
    """Full report over sweep profiles and a self-assessed label table.

    Per-topic and overall accuracy are computed for every sweep point under
    the selected mechanism (overall accuracy under the other mechanism is
    reported alongside). Everything rank- or confusion-based uses the largest
    sweep point. Topics with no labeled users get None accuracy; precision or
    recall denominators of zero yield 0 and the topic is flagged.
    """
    if mechanism not in MECHANISMS:
        raise ValueError(f"unknown mechanism '{mechanism}'")
    if not profiles_by_k:
        raise EmptyInputError("no sweep profiles to evaluate")
    ks = sorted(profiles_by_k)
    k_max = ks[-1]

    labeled_by_k: dict[int, list[UserProfile]] = {
        k: [p for p in profiles_by_k[k] if p.user_id in labels] for k in ks
    }
    if not labeled_by_k[k_max]:
        raise EmptyInputError("no labeled users present in the profiles")

    per_topic: dict[str, dict[int, float | None]] = {t: {} for t in TOPICS}
    overall_by_mech: dict[str, dict[int, float]] = {m: {} for m in MECHANISMS}
    for k in ks:
        rows = labeled_by_k[k]
        for mech in MECHANISMS:
            hits = sum(
                1 for p in rows if _predicted_or_none(p.vector(mech)) == labels[p.user_id]
            )
            overall_by_mech[mech][k] = hits / len(rows) if rows else 0.0
        for topic in TOPICS:
            topic_rows = [p for p in rows if labels[p.user_id] == topic]
            if not topic_rows:
                per_topic[topic][k] = None
                continue
            hits = sum(
                1
                for p in topic_rows
                if _predicted_or_none(p.vector(mechanism)) == topic
            )
            per_topic[topic][k] = hits / len(topic_rows)

    confusion = [[0] * N_TOPICS for _ in range(N_TOPICS)]
    final_rows = []
    for p in labeled_by_k[k_max]:
        predicted = _predicted_or_none(p.vector(mechanism))
        if predicted is None:
            continue  # no mapped mass under this mechanism; not tallied
        final_rows.append(p)
        confusion[TOPICS.index(labels[p.user_id])][TOPICS.index(predicted)] += 1

    precision: dict[str, float] = {}
    recall: dict[str, float] = {}
    undefined_p: list[str] = []
    undefined_r: list[str] = []
    for i, topic in enumerate(TOPICS):
        tp = confusion[i][i]
        col = sum(confusion[r][i] for r in range(N_TOPICS))
        row = sum(confusion[i])
        if col == 0:
            precision[topic] = 0.0
            undefined_p.append(topic)
        else:
            precision[topic] = tp / col
        if row == 0:
            recall[topic] = 0.0
            undefined_r.append(topic)
        else:
            recall[topic] = tp / row

    cmc = cmc_curve(final_rows, labels, mechanism) if final_rows else cmc_curve(
        labeled_by_k[k_max], labels, mechanism
    )

    roc: dict[str, tuple[tuple[float, float, float], ...]] = {}
    rows = final_rows if final_rows else list(labeled_by_k[k_max])
    for i, topic in enumerate(TOPICS):
        scores = [p.vector(mechanism).scores[i] for p in rows]
        positives = [labels[p.user_id] == topic for p in rows]
        roc[topic] = roc_series(scores, positives)

    return EvalReport(
        mechanism=mechanism,
        sweep=tuple(ks),
        n_labeled=len(final_rows),
        per_topic_accuracy=per_topic,
        overall_accuracy=dict(overall_by_mech[mechanism]),
        overall_accuracy_by_mechanism=overall_by_mech,
        precision=precision,
        recall=recall,
        undefined_precision=tuple(undefined_p),
        undefined_recall=tuple(undefined_r),
        confusion=tuple(tuple(row) for row in confusion),
        cmc=cmc,
        roc_points=roc,
    )
