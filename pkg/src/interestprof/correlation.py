"""Topic correlation across users: Pearson matrix with bands, co-interest index."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EmptyInputError
from .profiling import UserProfile
from .taxonomy import N_TOPICS

BAND_HIGH_POSITIVE = "high-positive"
BAND_POSITIVE = "positive"
BAND_NEGATIVE = "negative"
BAND_HIGH_NEGATIVE = "high-negative"
BAND_UNDEFINED = "undefined"


def band_of(rho: float) -> str:
    """Correlation band. Intervals: (0.5,1] / (0,0.5] / [-0.5,0] / [-1,-0.5)."""
    if math.isnan(rho):
        return BAND_UNDEFINED
    if rho > 0.5:
        return BAND_HIGH_POSITIVE
    if rho > 0.0:
        return BAND_POSITIVE
    if rho >= -0.5:
        return BAND_NEGATIVE
    return BAND_HIGH_NEGATIVE


@dataclass
class CorrelationMatrix:
    """24x24 Pearson coefficients (NaN where undefined) and their bands."""

    rho: np.ndarray
    bands: tuple[tuple[str, ...], ...]

    def value(self, i: int, j: int) -> float | None:
        v = float(self.rho[i, j])
        return None if math.isnan(v) else v


def scores_matrix(profiles: Sequence[UserProfile], mechanism: str = "occ") -> np.ndarray:
    """Users-by-topics score matrix from the selected mechanism's vectors."""
    return np.array(
        [p.vector(mechanism).scores for p in profiles], dtype=np.float64
    ).reshape(len(profiles), N_TOPICS)


def pearson_matrix(profiles: Sequence[UserProfile], mechanism: str = "occ") -> CorrelationMatrix:
    """Sample Pearson coefficients between topic score columns across users.

    Columns that are exactly constant have no variance; their rows and columns
    are undefined (NaN) rather than forced to zero. The diagonal is exactly 1
    wherever the column varies.
    """
    if len(profiles) < 2:
        raise EmptyInputError("pearson_matrix needs at least 2 profiles")
    x = scores_matrix(profiles, mechanism)
    constant = np.all(x == x[0], axis=0)

    centered = x - x.mean(axis=0)
    cross = centered.T @ centered
    spread = np.sqrt(np.diag(cross))
    denom = np.outer(spread, spread)
    with np.errstate(invalid="ignore", divide="ignore"):
        rho = cross / denom
    rho = (rho + rho.T) / 2.0
    rho = np.clip(rho, -1.0, 1.0)
    rho[constant, :] = np.nan
    rho[:, constant] = np.nan
    diag = np.arange(N_TOPICS)
    rho[diag[~constant], diag[~constant]] = 1.0

    bands = tuple(tuple(band_of(float(v)) for v in row) for row in rho)
    return CorrelationMatrix(rho=rho, bands=bands)


def co_interest_matrix(
    profiles: Sequence[UserProfile], tau: float = 0.1, mechanism: str = "occ"
) -> np.ndarray:
    """Jaccard-style ratio of users interested in both topics over either.

    A user counts as interested in a topic when their score is >= tau.
    Entries with no interested user on either side are 0.
    """
    if not 0.0 < tau <= 1.0:
        raise ValueError(f"tau must be in (0, 1], got {tau}")
    if not profiles:
        raise EmptyInputError("co_interest_matrix needs at least 1 profile")
    interested = (scores_matrix(profiles, mechanism) >= tau).astype(np.int64)
    both = interested.T @ interested
    per_topic = interested.sum(axis=0)
    either = per_topic[:, None] + per_topic[None, :] - both
    return np.where(either > 0, both / np.maximum(either, 1), 0.0)
