"""Count-based change quantities.

Once a word's occurrences are clustered into senses, everything below
operates on the per-cluster occurrence counts of the two corpora: the
binary change decision, smoothed sense distributions, the symmetrized
Kullback-Leibler distance between them, and a normalized change
coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, NamedTuple, Sequence

import numpy as np

Direction = Literal["gained", "lost"]
MeasureName = Literal["sj_distance", "coefficient"]


class Witness(NamedTuple):
    """One cluster whose occupancy pattern signals a sense change."""

    cluster: int
    direction: Direction
    n1: int
    n2: int


@dataclass(frozen=True)
class SenseCounts:
    """Occurrence counts per sense cluster for a word in both corpora."""

    counts_c1: tuple[int, ...]
    counts_c2: tuple[int, ...]

    def __post_init__(self) -> None:
        c1 = tuple(int(x) for x in self.counts_c1)
        c2 = tuple(int(x) for x in self.counts_c2)
        object.__setattr__(self, "counts_c1", c1)
        object.__setattr__(self, "counts_c2", c2)
        if len(c1) != len(c2) or not c1:
            raise ValueError("count vectors must be non-empty and equally long")
        if min(c1) < 0 or min(c2) < 0:
            raise ValueError("counts must be non-negative")
        if sum(c1) < 1 or sum(c2) < 1:
            raise ValueError("each corpus must contribute at least one occurrence")

    @property
    def m(self) -> int:
        return len(self.counts_c1)

    @property
    def total_c1(self) -> int:
        return sum(self.counts_c1)

    @property
    def total_c2(self) -> int:
        return sum(self.counts_c2)

    @classmethod
    def from_occupancy(cls, occupancy) -> "SenseCounts":
        occ = np.asarray(occupancy)
        if occ.ndim != 2 or occ.shape[1] != 2:
            raise ValueError("occupancy must be an (m, 2) table")
        return cls(tuple(occ[:, 0].tolist()), tuple(occ[:, 1].tolist()))


@dataclass(frozen=True)
class DecisionThresholds:
    """Bounds for the binary decision rule.

    A cluster witnesses a gained sense when the first corpus holds at
    most ``upper_bound`` of its occurrences and the second at least
    ``lower_bound`` (and vice versa for a lost sense). ``strict_zero``
    switches to the rule that any cluster empty on one side counts,
    suited to sparse corpora.
    """

    lower_bound: int = 5
    upper_bound: int = 2
    strict_zero: bool = False

    def __post_init__(self) -> None:
        if not self.lower_bound > self.upper_bound >= 0:
            raise ValueError(
                "need lower_bound > upper_bound >= 0, "
                f"got {self.lower_bound}, {self.upper_bound}"
            )


@dataclass(frozen=True)
class ChangeVerdict:
    """Binary change decision plus the clusters that justify it."""

    word: str
    changed: bool
    witnesses: tuple[Witness, ...] = ()

    def __post_init__(self) -> None:
        if self.changed != bool(self.witnesses):
            raise ValueError("changed must hold exactly when witnesses exist")


@dataclass(frozen=True)
class ShiftScore:
    """Graded change score; ``coefficient`` values additionally lie in [0, 1]."""

    word: str
    value: float
    measure: MeasureName

    def __post_init__(self) -> None:
        if self.value < 0:
            raise ValueError("score must be non-negative")
        if self.measure == "coefficient" and self.value > 1:
            raise ValueError("coefficient must not exceed 1")


@dataclass(frozen=True)
class SenseDistribution:
    """Smoothed sense probability distribution for one corpus."""

    probs: np.ndarray
    sigma: float = 1.0

    def __post_init__(self) -> None:
        p = np.asarray(self.probs, dtype=np.float64)
        object.__setattr__(self, "probs", p)
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if p.ndim != 1 or p.size == 0:
            raise ValueError("probs must be a non-empty vector")
        if not np.all(p > 0):
            raise ValueError("probs must be strictly positive")
        if abs(float(p.sum()) - 1.0) > 1e-12:
            raise ValueError("probs must sum to 1")

    @property
    def m(self) -> int:
        return int(self.probs.size)


def decide_change(
    counts: SenseCounts, thresholds: DecisionThresholds, word: str = ""
) -> ChangeVerdict:
    """Decide whether the word gained or lost a sense between the corpora.

    Default rule: cluster k is a gained-sense witness when
    n1[k] <= upper_bound and n2[k] >= lower_bound, a lost-sense witness
    in the mirror case. With ``strict_zero`` a witness is any cluster
    with zero occurrences on one side. Either direction suffices for a
    positive verdict.
    """
    witnesses: list[Witness] = []
    for k, (n1, n2) in enumerate(zip(counts.counts_c1, counts.counts_c2)):
        if thresholds.strict_zero:
            if n1 == 0 and n2 > 0:
                witnesses.append(Witness(k, "gained", n1, n2))
            elif n2 == 0 and n1 > 0:
                witnesses.append(Witness(k, "lost", n1, n2))
        else:
            if n1 <= thresholds.upper_bound and n2 >= thresholds.lower_bound:
                witnesses.append(Witness(k, "gained", n1, n2))
            elif n2 <= thresholds.upper_bound and n1 >= thresholds.lower_bound:
                witnesses.append(Witness(k, "lost", n1, n2))
    return ChangeVerdict(word=word, changed=bool(witnesses), witnesses=tuple(witnesses))


def smooth(counts: Sequence[int], sigma: float = 1.0) -> SenseDistribution:
    """Laplace-style smoothing with a uniform prior of total mass sigma.

    probs[k] = (counts[k] + sigma/m) / (sum(counts) + sigma). Every
    probability is strictly positive, so divergences stay finite even
    for clusters one corpus never touches.
    """
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    n = np.asarray(counts, dtype=np.float64)
    if n.ndim != 1 or n.size == 0:
        raise ValueError("counts must be a non-empty vector")
    if (n < 0).any():
        raise ValueError("counts must be non-negative")
    m = n.size
    probs = (n + sigma / m) / (n.sum() + sigma)
    return SenseDistribution(probs=probs, sigma=sigma)


def sj_distance(p: SenseDistribution, q: SenseDistribution) -> float:
    """Symmetrized Kullback-Leibler distance, natural logarithm.

    Returns (1/2) [KL(p, q) + KL(q, p)], computed termwise as
    (1/2) sum (p_k - q_k)(ln p_k - ln q_k) so every term is
    non-negative in floating point as well.
    """
    if p.m != q.m:
        raise ValueError(f"distribution lengths differ: {p.m} vs {q.m}")
    a, b = p.probs, q.probs
    return 0.5 * float(np.sum((a - b) * (np.log(a) - np.log(b))))


def change_coefficient(counts: SenseCounts) -> float:
    """Normalized total variation between the two corpora's sense usage.

    (1 / (2 S1 S2)) sum_k |S2 n1[k] - S1 n2[k]|, equal to half the L1
    distance between the per-corpus sense proportions, hence in [0, 1].
    The sum runs in exact integer arithmetic with one final division, so
    the boundary cases give exactly 0.0 and 1.0 and scaling one corpus's
    counts by a positive integer never changes the value.
    """
    s1, s2 = counts.total_c1, counts.total_c2
    numerator = sum(
        abs(s2 * n1 - s1 * n2) for n1, n2 in zip(counts.counts_c1, counts.counts_c2)
    )
    return numerator / (2 * s1 * s2)
