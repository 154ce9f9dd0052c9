"""K-means clustering with silhouette-driven choice of k and of initial centroids.

For every candidate k the engine runs several seeded k-means++-style
initializations, scores each converged run with the mean silhouette, and
keeps the run with the best score (ties: smaller k, then lower inertia,
then lower restart index). Distances are Euclidean throughout.

All internal work happens on the lexicographically sorted list of
distinct input vectors, with multiplicities. Duplicate occurrences are
therefore always co-assigned, results are bit-identical under any
permutation of the input, and reruns with the same seed reproduce the
same clustering exactly.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.spatial.distance import cdist


@dataclass
class ClusterConfig:
    """Knobs for model selection and the underlying k-means runs."""

    k_max: int = 10
    n_restarts: int = 10
    max_iters: int = 300
    tol: float = 1e-6
    seed: int = 0

    def validate(self) -> None:
        if self.k_max < 2:
            raise ValueError(f"k_max must be >= 2, got {self.k_max}")
        if self.n_restarts < 1:
            raise ValueError(f"n_restarts must be >= 1, got {self.n_restarts}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tol < 0:
            raise ValueError(f"tol must be >= 0, got {self.tol}")


@dataclass
class Clustering:
    """Hard partition of occurrence vectors.

    ``occupancy[k]`` counts occurrences per corpus: column 0 for the first
    corpus, column 1 for the second (all zero when a single corpus was
    clustered). ``inertia_history`` records the total inertia after every
    Lloyd iteration of the winning run.
    """

    assignments: np.ndarray  # (n,) int cluster index in [0, m)
    centroids: np.ndarray  # (m, d) float64
    m: int
    occupancy: np.ndarray  # (m, 2) int
    inertia: float
    silhouette: float | None = None
    inertia_history: list[float] = field(default_factory=list)

    def validate(self, n_expected: int | None = None) -> None:
        if self.assignments.min(initial=0) < 0 or self.assignments.max(initial=0) >= self.m:
            raise ValueError("assignments out of range")
        sizes = np.bincount(self.assignments, minlength=self.m)
        if (sizes == 0).any():
            raise ValueError("empty cluster in clustering")
        if n_expected is not None and len(self.assignments) != n_expected:
            raise ValueError("assignment length mismatch")
        if self.occupancy.sum() != len(self.assignments):
            raise ValueError("occupancy does not add up to the input count")


def _as_matrix(vectors) -> np.ndarray:
    X = np.asarray(vectors, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("vectors must be a non-empty (n, d) array")
    if not np.all(np.isfinite(X)):
        raise ValueError("vectors contain non-finite components")
    return X


def _sq_dists(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    d2 = (
        np.einsum("ij,ij->i", A, A)[:, None]
        + np.einsum("ij,ij->i", B, B)[None, :]
        - 2.0 * (A @ B.T)
    )
    np.maximum(d2, 0.0, out=d2)
    return d2


def _lloyd(
    uniq: np.ndarray,
    counts: np.ndarray,
    init_centroids: np.ndarray,
    max_iters: int,
    tol: float,
) -> tuple[np.ndarray, np.ndarray, float, list[float]]:
    """Lloyd iterations over distinct vectors weighted by multiplicity.

    Returns (assignment per distinct vector, centroids, inertia, history).
    Nearest-centroid ties go to the lowest centroid index. When a cluster
    comes up empty, the distinct vector farthest from its own centroid is
    moved into it (donors keep at least one distinct vector), which keeps
    every cluster non-empty without restarting and never increases inertia.
    """
    k = init_centroids.shape[0]
    centroids = init_centroids.astype(np.float64, copy=True)
    w = counts.astype(np.float64)
    prev_assign: np.ndarray | None = None
    prev_inertia = np.inf
    history: list[float] = []
    assign = np.zeros(len(uniq), dtype=np.intp)
    for _ in range(max_iters):
        d2 = _sq_dists(uniq, centroids)
        assign = np.argmin(d2, axis=1)

        group_sizes = np.bincount(assign, minlength=k)
        for empty in np.flatnonzero(group_sizes == 0):
            own = d2[np.arange(len(uniq)), assign]
            movable = group_sizes[assign] >= 2
            donor = int(np.argmax(np.where(movable, own, -np.inf)))
            group_sizes[assign[donor]] -= 1
            assign[donor] = empty
            group_sizes[empty] += 1

        weighted = uniq * w[:, None]
        centroids = np.zeros_like(centroids)
        np.add.at(centroids, assign, weighted)
        occ = np.bincount(assign, weights=w, minlength=k)
        centroids /= occ[:, None]

        d2 = _sq_dists(uniq, centroids)
        inertia = float(np.sum(w * d2[np.arange(len(uniq)), assign]))
        history.append(inertia)

        if prev_assign is not None and np.array_equal(assign, prev_assign):
            break
        if np.isfinite(prev_inertia):
            if prev_inertia <= 0.0 or (prev_inertia - inertia) / prev_inertia < tol:
                break
        prev_assign = assign.copy()
        prev_inertia = inertia
    return assign, centroids, history[-1], history


def _grouped_silhouette(dists: np.ndarray, weights: np.ndarray) -> float:
    """Mean silhouette from distinct-vector distances and per-cluster weights.

    ``weights[u, c]`` counts occurrences of distinct vector ``u`` assigned
    to cluster ``c``; occurrences sharing a distinct vector have pairwise
    distance zero, so they share one silhouette value.
    """
    n_per_cluster = weights.sum(axis=0)
    m = weights.shape[1]
    sums = dists @ weights  # (U, m) summed distance to each cluster's occurrences

    denom = np.maximum(n_per_cluster - 1.0, 1.0)
    a = sums / denom
    a[:, n_per_cluster == 1] = 0.0

    ratios = sums / n_per_cluster[None, :]
    b = np.empty_like(ratios)
    for c in range(m):
        others = np.delete(ratios, c, axis=1)
        b[:, c] = others.min(axis=1)

    widest = np.maximum(a, b)
    with np.errstate(invalid="ignore", divide="ignore"):
        sil = np.where(widest > 0.0, (b - a) / widest, 0.0)
    return float(np.sum(weights * sil) / weights.sum())


def silhouette_score(vectors, assignments) -> float:
    """Mean over points of (b - a) / max(a, b) with Euclidean distances.

    ``a`` is the mean distance to the other points of the own cluster
    (0 for singletons), ``b`` the smallest mean distance to another
    cluster. Degenerate points with a == b == 0 score 0.
    """
    X = _as_matrix(vectors)
    labels = np.asarray(assignments)
    if labels.shape != (X.shape[0],):
        raise ValueError("assignments must be one label per vector")
    distinct_labels, label_idx = np.unique(labels, return_inverse=True)
    if len(distinct_labels) < 2:
        raise ValueError("silhouette needs at least 2 clusters")
    uniq, inverse = np.unique(X, axis=0, return_inverse=True)
    weights = np.zeros((len(uniq), len(distinct_labels)))
    np.add.at(weights, (inverse, label_idx), 1.0)
    return _grouped_silhouette(cdist(uniq, uniq), weights)


def _check_init(uniq: np.ndarray, k: int, init_centroids) -> np.ndarray:
    init = np.asarray(init_centroids, dtype=np.float64)
    if init.shape != (k, uniq.shape[1]):
        raise ValueError(f"init centroids must have shape ({k}, {uniq.shape[1]})")
    if len(np.unique(init, axis=0)) != k:
        raise ValueError("init centroids must be distinct")
    return init


def kmeans(
    vectors,
    k: int,
    init_centroids,
    max_iters: int = 300,
    tol: float = 1e-6,
    tags=None,
) -> Clustering:
    """Plain k-means from explicit initial centroids.

    ``tags`` optionally labels every vector with its corpus (0 or 1) to
    fill the occupancy table; without tags all counts land in column 0.
    """
    X = _as_matrix(vectors)
    uniq, inverse, counts = np.unique(X, axis=0, return_inverse=True, return_counts=True)
    if not 1 <= k <= len(uniq):
        raise ValueError(f"k={k} outside [1, {len(uniq)}] (number of distinct vectors)")
    init = _check_init(uniq, k, init_centroids)
    assign_u, centroids, inertia, history = _lloyd(uniq, counts, init, max_iters, tol)
    assignments = assign_u[inverse]
    clustering = Clustering(
        assignments=assignments,
        centroids=centroids,
        m=k,
        occupancy=_occupancy(assignments, tags, k),
        inertia=inertia,
        inertia_history=history,
    )
    clustering.validate(n_expected=len(X))
    return clustering


def _occupancy(assignments: np.ndarray, tags, m: int) -> np.ndarray:
    occ = np.zeros((m, 2), dtype=np.int64)
    if tags is None:
        occ[:, 0] = np.bincount(assignments, minlength=m)
        return occ
    t = np.asarray(tags)
    if t.shape != assignments.shape or not np.isin(t, (0, 1)).all():
        raise ValueError("tags must assign 0 or 1 to every vector")
    np.add.at(occ, (assignments, t), 1)
    return occ


def _kmeanspp_init(
    uniq: np.ndarray, counts: np.ndarray, k: int, rng: np.random.Generator
) -> np.ndarray:
    """Sample k distinct seed vectors, weighting by multiplicity times
    squared distance to the nearest already-chosen seed."""
    w = counts.astype(np.float64)
    chosen = [int(rng.choice(len(uniq), p=w / w.sum()))]
    d2 = _sq_dists(uniq, uniq[chosen])[:, 0]
    while len(chosen) < k:
        probs = w * d2
        total = probs.sum()
        if total <= 0.0:  # cannot happen while k <= distinct count; guard anyway
            remaining = np.setdiff1d(np.arange(len(uniq)), chosen)
            chosen.append(int(remaining[0]))
        else:
            chosen.append(int(rng.choice(len(uniq), p=probs / total)))
        d2 = np.minimum(d2, _sq_dists(uniq, uniq[chosen[-1] : chosen[-1] + 1])[:, 0])
    return uniq[chosen].copy()


def _single_cluster(
    uniq: np.ndarray, inverse: np.ndarray, counts: np.ndarray, tags
) -> Clustering:
    w = counts.astype(np.float64)
    centroid = (uniq * w[:, None]).sum(axis=0) / w.sum()
    d2 = _sq_dists(uniq, centroid[None, :])[:, 0]
    inertia = float(np.sum(w * d2))
    assignments = np.zeros(len(inverse), dtype=np.intp)
    return Clustering(
        assignments=assignments,
        centroids=centroid[None, :],
        m=1,
        occupancy=_occupancy(assignments, tags, 1),
        inertia=inertia,
        silhouette=None,
        inertia_history=[inertia],
    )


def select_and_cluster(vectors, tags=None, config: ClusterConfig | None = None) -> Clustering:
    """Cluster ``vectors``, choosing k and the initialization by silhouette.

    Runs ``n_restarts`` seeded k-means++-style initializations for every
    k in 2..min(k_max, #distinct vectors) and returns the converged run
    with the highest silhouette (ties: smaller k, lower inertia, lower
    restart index). Inputs with fewer than 4 vectors or fewer than 2
    distinct vectors fall back to the single-cluster solution, for which
    the silhouette is undefined.

    The restart-and-keep-best reading of silhouette-guided initialization
    is one of several plausible ones; it is what this engine implements.
    """
    if config is None:
        config = ClusterConfig()
    config.validate()
    X = _as_matrix(vectors)
    uniq, inverse, counts = np.unique(X, axis=0, return_inverse=True, return_counts=True)
    if len(X) < 4 or len(uniq) < 2:
        return _single_cluster(uniq, inverse, counts, tags)

    dists = cdist(uniq, uniq)
    n = float(len(X))
    seed = config.seed & 0xFFFFFFFFFFFFFFFF  # SeedSequence wants non-negative entropy
    best_key: tuple[float, int, float, int] | None = None
    best: tuple[np.ndarray, np.ndarray, float, list[float], float, int] | None = None

    for k in range(2, min(config.k_max, len(uniq)) + 1):
        for restart in range(config.n_restarts):
            rng = np.random.default_rng([seed, k, restart])
            init = _kmeanspp_init(uniq, counts, k, rng)
            assign_u, centroids, inertia, history = _lloyd(
                uniq, counts, init, config.max_iters, config.tol
            )
            weights = np.zeros((len(uniq), k))
            weights[np.arange(len(uniq)), assign_u] = counts
            sil = _grouped_silhouette(dists, weights)
            key = (-sil, k, inertia, restart)
            if best_key is None or key < best_key:
                best_key = key
                best = (assign_u, centroids, inertia, history, sil, k)

    assert best is not None
    assign_u, centroids, inertia, history, sil, k = best
    assignments = assign_u[inverse]
    clustering = Clustering(
        assignments=assignments,
        centroids=centroids,
        m=k,
        occupancy=_occupancy(assignments, tags, k),
        inertia=inertia,
        silhouette=sil,
        inertia_history=history,
    )
    clustering.validate(n_expected=len(X))
    return clustering


def config_for_word(config: ClusterConfig, word: str, scope: str) -> ClusterConfig:
    """Copy of ``config`` reseeded for one word and pipeline scope.

    The derived seed mixes the global seed, the word and the scope with a
    stable hash, so batch results do not depend on scheduling or on
    manifest order.
    """
    return replace(config, seed=derive_seed(config.seed, word, scope))


def derive_seed(global_seed: int, word: str, scope: str) -> int:
    material = f"{global_seed & 0xFFFFFFFFFFFFFFFF}\x1f{scope}\x1f{word}".encode("utf-8")
    digest = hashlib.blake2b(material, digest_size=8).digest()
    return int.from_bytes(digest, "little")
