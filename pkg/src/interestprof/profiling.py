"""User-level aggregation of image rows into normalized interest vectors.

The probability mechanism column-sums the per-image probability rows and
divides by the grand total, so the user vector is a distribution. The
occurrence mechanism gives each image one unit of mass, split evenly across
the topics where its occurrence row attains its maximum (fractional credit on
ties, exact via Fraction); images with all-zero rows push their mass into
``unmapped``. Both vectors therefore sum to 1 including unmapped mass.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence, TypeVar

from .errors import EmptyInputError, NoPredictionError
from .ingest import DEFAULT_TOP_K, PredictionRecord, ProfileDataset
from .scoring import ImageLevelMatrices, TopicDistribution, build_matrices
from .taxonomy import N_TOPICS, TOPICS, Taxonomy

MECHANISMS = ("prob", "occ")

DEFAULT_SWEEP = (5, 10, 50, 75, 100)

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class UserProfile:
    user_id: str
    n_images: int
    v_prob: TopicDistribution
    v_occ: TopicDistribution
    mechanism: str
    predicted_topic: str
    ties: tuple[str, ...] = ()  # tied argmax topics, empty when the argmax is unique

    def vector(self, mechanism: str | None = None) -> TopicDistribution:
        m = mechanism or self.mechanism
        if m not in MECHANISMS:
            raise ValueError(f"unknown mechanism '{m}'")
        return self.v_prob if m == "prob" else self.v_occ


def aggregate_prob(m: ImageLevelMatrices) -> TopicDistribution:
    """Column-sum of the probability rows, normalized to total mass 1.

    Column sums use math.fsum, so the vector is exactly invariant to the
    order of the user's images.
    """
    if m.n_images() == 0:
        raise EmptyInputError("cannot aggregate zero images")
    totals = [math.fsum(col) for col in zip(*(row.scores for row in m.prob_rows))]
    unmapped = math.fsum(row.unmapped_mass for row in m.prob_rows)
    grand = math.fsum(totals + [unmapped])
    if grand == 0.0:
        # No probability mass anywhere: the whole unit is unmapped.
        return TopicDistribution(scores=(0.0,) * N_TOPICS, unmapped_mass=1.0)
    return TopicDistribution(
        scores=tuple(t / grand for t in totals),
        unmapped_mass=unmapped / grand,
    )


def aggregate_occ(m: ImageLevelMatrices) -> TopicDistribution:
    """Per-image argmax voting over the occurrence rows, fractional on ties."""
    n = m.n_images()
    if n == 0:
        raise EmptyInputError("cannot aggregate zero images")
    credits = [Fraction(0)] * N_TOPICS
    unmapped = Fraction(0)
    for row in m.occ_rows:
        peak = max(row.scores)
        if peak == 0.0:
            unmapped += 1
            continue
        tied = [i for i, s in enumerate(row.scores) if s == peak]
        share = Fraction(1, len(tied))
        for i in tied:
            credits[i] += share
    return TopicDistribution(
        scores=tuple(float(c / n) for c in credits),
        unmapped_mass=float(unmapped / n),
    )


def argmax_topics(v: TopicDistribution) -> tuple[str, ...]:
    """Topics attaining the maximum score, in canonical order; empty if all zero."""
    peak = max(v.scores)
    if peak <= 0.0:
        return ()
    return tuple(TOPICS[i] for i, s in enumerate(v.scores) if s == peak)


def predict_topic(v: TopicDistribution) -> str:
    """Argmax topic; ties break toward the lowest canonical topic index."""
    best = argmax_topics(v)
    if not best:
        raise NoPredictionError("all topic scores are zero, no topic can be predicted")
    return best[0]


def profile_user(
    records: Sequence[PredictionRecord],
    tax: Taxonomy,
    k: int = DEFAULT_TOP_K,
    mechanism: str = "occ",
) -> UserProfile:
    """Score, aggregate and predict for one user's records (order preserved)."""
    if mechanism not in MECHANISMS:
        raise ValueError(f"unknown mechanism '{mechanism}'")
    if not records:
        raise EmptyInputError("cannot profile a user with zero records")
    m = build_matrices(list(records), tax, k)
    v_prob = aggregate_prob(m)
    v_occ = aggregate_occ(m)
    selected = v_prob if mechanism == "prob" else v_occ
    best = argmax_topics(selected)
    if not best:
        raise NoPredictionError(
            f"user '{records[0].user_id}': no prediction label maps to any topic"
        )
    return UserProfile(
        user_id=records[0].user_id,
        n_images=m.n_images(),
        v_prob=v_prob,
        v_occ=v_occ,
        mechanism=mechanism,
        predicted_topic=best[0],
        ties=best if len(best) > 1 else (),
    )


def ordered_map(fn: Callable[[T], R], items: Iterable[T], jobs: int = 1) -> list[R]:
    """map() preserving input order; thread-parallel when jobs > 1.

    Workers are pure, so the result is identical for any jobs value.
    """
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def profile_users(
    dataset: ProfileDataset,
    tax: Taxonomy,
    k: int = DEFAULT_TOP_K,
    mechanism: str = "occ",
    jobs: int = 1,
) -> list[UserProfile]:
    """Profile every user over their full record list, dataset order."""
    users = dataset.users()
    return ordered_map(
        lambda u: profile_user(dataset.records[u], tax, k, mechanism), users, jobs
    )


def sweep_profiles(
    dataset: ProfileDataset,
    tax: Taxonomy,
    k: int = DEFAULT_TOP_K,
    sweep: Sequence[int] = DEFAULT_SWEEP,
    mechanism: str = "occ",
    jobs: int = 1,
) -> dict[int, list[UserProfile]]:
    """Profiles per sweep value, using each user's first n records.

    Users with fewer than n records contribute all their records at that
    sweep point. Sweep values must be positive and strictly increasing.
    """
    if not sweep or any(s <= 0 for s in sweep) or list(sweep) != sorted(set(sweep)):
        raise ValueError(f"sweep values must be positive and strictly increasing: {sweep}")
    users = dataset.users()

    def per_user(u: str) -> list[UserProfile]:
        recs = dataset.records[u]
        return [profile_user(recs[:n], tax, k, mechanism) for n in sweep]

    per_user_rows = ordered_map(per_user, users, jobs)
    return {
        n: [row[j] for row in per_user_rows]
        for j, n in enumerate(sweep)
    }
