"""Per-word end-to-end procedures and the batch driver.

Method 1 clusters the pooled occurrences of both corpora once and reads
sense counts off the corpus composition of each cluster. Method 2
clusters each corpus separately, matches the two cluster inventories by
centroid distance, and merges matched pairs. Either way the resulting
count table feeds the binary decision rule and the configured graded
measure, so a word's verdict and score always describe the same senses.

Batches are deterministic by construction: every word's clustering is
seeded from the global seed, the word and the pipeline stage, so results
do not depend on manifest order or on how many workers run.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .cluster import ClusterConfig, config_for_word, select_and_cluster
from .errors import ManifestError
from .matching import Matching, build_cost_matrix, hungarian
from .measures import (
    ChangeVerdict,
    DecisionThresholds,
    MeasureName,
    SenseCounts,
    ShiftScore,
    change_coefficient,
    decide_change,
    sj_distance,
    smooth,
)
from .store import EmbeddingSet, Manifest, load_word_pair


@dataclass
class PipelineConfig:
    """Everything that determines a run's outputs."""

    method: Literal["m1", "m2"] = "m1"
    s2_measure: MeasureName = "sj_distance"
    cluster_config: ClusterConfig = field(default_factory=ClusterConfig)
    thresholds: DecisionThresholds = field(default_factory=DecisionThresholds)
    sigma: float = 1.0

    def validate(self) -> None:
        if self.method not in ("m1", "m2"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.s2_measure not in ("sj_distance", "coefficient"):
            raise ValueError(f"unknown measure {self.s2_measure!r}")
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        self.cluster_config.validate()


@dataclass
class WordResult:
    """Outcome for one target word.

    ``occupancy`` is the (m, 2) count table the verdict and score were
    computed from; ``assignments_c1``/``assignments_c2`` give each
    occurrence's cluster in that table's index space (for method 2 these
    are merged-cluster indices). ``matching`` is populated by method 2.
    """

    word: str
    verdict: ChangeVerdict
    score: ShiftScore
    m: int
    occupancy: np.ndarray
    counts: SenseCounts
    assignments_c1: np.ndarray
    assignments_c2: np.ndarray
    matching: Matching | None = None


@dataclass
class BatchResult:
    """All per-word outcomes of a batch run.

    ``results`` is sorted by word; ``ranking`` descending by score with
    alphabetical tie-break; ``errors`` maps failed words to diagnostics.
    """

    results: list[WordResult]
    ranking: list[ShiftScore]
    errors: dict[str, str]


def _score(counts: SenseCounts, config: PipelineConfig, word: str) -> ShiftScore:
    if config.s2_measure == "sj_distance":
        p1 = smooth(counts.counts_c1, config.sigma)
        p2 = smooth(counts.counts_c2, config.sigma)
        value = sj_distance(p1, p2)
    else:
        value = change_coefficient(counts)
    return ShiftScore(word=word, value=value, measure=config.s2_measure)


def _check_pair(pair: tuple[EmbeddingSet, EmbeddingSet]) -> tuple[EmbeddingSet, EmbeddingSet]:
    es1, es2 = pair
    if es1.word != es2.word:
        raise ValueError(f"word mismatch in pair: {es1.word!r} vs {es2.word!r}")
    if es1.dim != es2.dim:
        raise ValueError(f"dim mismatch for {es1.word!r}: {es1.dim} vs {es2.dim}")
    return es1, es2


def run_method1(pair: tuple[EmbeddingSet, EmbeddingSet], config: PipelineConfig) -> WordResult:
    """Joint clustering of both corpora's occurrences of one word."""
    config.validate()
    es1, es2 = _check_pair(pair)
    word = es1.word
    X = np.vstack([es1.vectors, es2.vectors]).astype(np.float64)
    tags = np.concatenate(
        [np.zeros(es1.count, dtype=np.intp), np.ones(es2.count, dtype=np.intp)]
    )
    clustering = select_and_cluster(
        X, tags=tags, config=config_for_word(config.cluster_config, word, "m1")
    )
    counts = SenseCounts.from_occupancy(clustering.occupancy)
    return WordResult(
        word=word,
        verdict=decide_change(counts, config.thresholds, word=word),
        score=_score(counts, config, word),
        m=clustering.m,
        occupancy=clustering.occupancy.copy(),
        counts=counts,
        assignments_c1=clustering.assignments[: es1.count].copy(),
        assignments_c2=clustering.assignments[es1.count :].copy(),
    )


def run_method2(pair: tuple[EmbeddingSet, EmbeddingSet], config: PipelineConfig) -> WordResult:
    """Separate per-corpus clusterings merged via minimum-cost matching.

    Matched real pairs become impure merged clusters (counts from both
    sides); a real cluster matched to a dummy keeps one side at zero and
    surfaces as a pure cluster. Merged clusters are indexed by the cost
    matrix row, so the first corpus's cluster a keeps index a.
    """
    config.validate()
    es1, es2 = _check_pair(pair)
    word = es1.word
    cl1 = select_and_cluster(
        es1.vectors.astype(np.float64),
        config=config_for_word(config.cluster_config, word, "m2:C1"),
    )
    cl2 = select_and_cluster(
        es2.vectors.astype(np.float64),
        config=config_for_word(config.cluster_config, word, "m2:C2"),
    )
    n1_counts = cl1.occupancy[:, 0]
    n2_counts = cl2.occupancy[:, 0]

    cost = build_cost_matrix(cl1.centroids, cl2.centroids)
    match = hungarian(cost)
    merged = np.zeros((cost.s, 2), dtype=np.int64)
    for i, j in match.pairs:
        if i < cost.m1:
            merged[i, 0] = n1_counts[i]
        if j < cost.m2:
            merged[i, 1] = n2_counts[j]

    counts = SenseCounts.from_occupancy(merged)
    col_to_row = {j: i for i, j in match.pairs}
    return WordResult(
        word=word,
        verdict=decide_change(counts, config.thresholds, word=word),
        score=_score(counts, config, word),
        m=cost.s,
        occupancy=merged,
        counts=counts,
        assignments_c1=cl1.assignments.copy(),
        assignments_c2=np.array([col_to_row[b] for b in cl2.assignments], dtype=np.intp),
        matching=match,
    )


def run_word(pair: tuple[EmbeddingSet, EmbeddingSet], config: PipelineConfig) -> WordResult:
    if config.method == "m1":
        return run_method1(pair, config)
    return run_method2(pair, config)


def run_corpus_pair(
    manifest: Manifest, config: PipelineConfig, jobs: int = 1
) -> BatchResult:
    """Run the configured method over every word present in both corpora.

    A word that fails (unreadable file, malformed payload) is recorded
    under ``errors`` and the batch continues. Output order is fixed:
    results alphabetical, ranking by descending score then word.
    """
    config.validate()
    words = manifest.words()
    if not words:
        raise ManifestError("manifest holds no word present in both corpora")

    def one(word: str) -> WordResult:
        return run_word(load_word_pair(manifest, word), config)

    results: list[WordResult] = []
    errors: dict[str, str] = {}
    if jobs <= 1:
        outcomes = []
        for word in words:
            try:
                outcomes.append((word, one(word), None))
            except Exception as exc:
                outcomes.append((word, None, f"{type(exc).__name__}: {exc}"))
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [(word, pool.submit(one, word)) for word in words]
            outcomes = []
            for word, fut in futures:
                try:
                    outcomes.append((word, fut.result(), None))
                except Exception as exc:
                    outcomes.append((word, None, f"{type(exc).__name__}: {exc}"))

    for word, result, error in outcomes:
        if error is None:
            results.append(result)
        else:
            errors[word] = error

    results.sort(key=lambda r: r.word)
    ranking = sorted((r.score for r in results), key=lambda s: (-s.value, s.word))
    return BatchResult(results=results, ranking=ranking, errors=errors)
