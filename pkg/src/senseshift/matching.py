"""Minimum-weight perfect matching between two cluster inventories.

The corpora may yield different cluster counts. The smaller side is
padded with zero-cost dummy clusters until the cost matrix is square,
a Hungarian solver finds the cheapest one-to-one correspondence, and
every real cluster matched to a dummy is reported as pure, i.e. a sense
present in only one corpus. Real-to-real pair costs are the Euclidean
distances between the clusters' centers of mass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist


@dataclass
class CostMatrix:
    """Square padded cost matrix.

    Rows 0..m1-1 are the first corpus' clusters, columns 0..m2-1 the
    second corpus', either padded with dummies up to s = max(m1, m2).
    Entries touching a dummy row or column are exactly 0.
    """

    costs: np.ndarray
    m1: int
    m2: int

    @property
    def s(self) -> int:
        return max(self.m1, self.m2)

    def validate(self) -> None:
        if self.m1 < 1 or self.m2 < 1:
            raise ValueError("cluster counts must be >= 1")
        if self.costs.shape != (self.s, self.s):
            raise ValueError(
                f"cost matrix must be {self.s}x{self.s}, got {self.costs.shape}"
            )
        if not np.all(np.isfinite(self.costs)):
            raise ValueError("cost matrix contains non-finite entries")
        if np.any(self.costs[self.m1 :, :] != 0.0) or np.any(self.costs[:, self.m2 :] != 0.0):
            raise ValueError("dummy rows/columns must be exactly 0")


@dataclass(frozen=True)
class Matching:
    """A perfect matching on the padded matrix.

    ``pairs`` lists (row, column) in row order and forms a permutation.
    ``pure_in_c1`` holds first-corpus cluster indices matched to dummy
    columns, ``pure_in_c2`` second-corpus cluster indices matched to
    dummy rows; at most one of the two sets can be non-empty.
    """

    pairs: tuple[tuple[int, int], ...]
    total_cost: float
    pure_in_c1: frozenset[int]
    pure_in_c2: frozenset[int]

    def col_of_row(self, row: int) -> int:
        return self.pairs[row][1]

    def row_of_col(self, col: int) -> int:
        for i, j in self.pairs:
            if j == col:
                return i
        raise KeyError(col)


def build_cost_matrix(centroids_c1, centroids_c2) -> CostMatrix:
    """Pairwise center-of-mass distances, padded square with zeros."""
    c1 = np.atleast_2d(np.asarray(centroids_c1, dtype=np.float64))
    c2 = np.atleast_2d(np.asarray(centroids_c2, dtype=np.float64))
    if c1.shape[1] != c2.shape[1]:
        raise ValueError("centroid dimensions differ between corpora")
    m1, m2 = c1.shape[0], c2.shape[0]
    s = max(m1, m2)
    costs = np.zeros((s, s))
    costs[:m1, :m2] = cdist(c1, c2)
    out = CostMatrix(costs=costs, m1=m1, m2=m2)
    out.validate()
    return out


def _min_cost_total(a: np.ndarray) -> float:
    """Minimum total cost of a perfect matching on the square matrix ``a``.

    Potential-based Hungarian method, cubic in the matrix size. The
    returned total is re-accumulated from the matched entries in row
    order so it is reproducible bit for bit.
    """
    n = a.shape[0]
    if n == 0:
        return 0.0
    INF = float("inf")
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    p = [0] * (n + 1)  # p[j] = row currently matched to column j, 0 if free
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = INF
            j1 = 0
            row = a[i0 - 1]
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = row[j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    col_of = [0] * n
    for j in range(1, n + 1):
        col_of[p[j] - 1] = j - 1
    total = 0.0
    for i in range(n):
        total += float(a[i, col_of[i]])
    return total


def _lex_min_assignment(a: np.ndarray) -> list[int]:
    """Column assigned to each row, lexicographically smallest optimum.

    Fixes rows top to bottom; for each row it keeps the smallest column
    whose cost plus an optimal completion of the remaining submatrix
    attains the minimum. Comparisons are exact float64 with no epsilon,
    so constructed ties resolve the same way on every run. The sub-solves
    add a factor of s² over the plain cubic solver, immaterial at the
    cluster counts seen here.
    """
    n = a.shape[0]
    cols_left = list(range(n))
    chosen: list[int] = []
    for r in range(n):
        rest_rows = range(r + 1, n)
        best_val = None
        best_idx = 0
        for idx, c in enumerate(cols_left):
            rest_cols = [x for x in cols_left if x != c]
            if rest_cols:
                sub_total = _min_cost_total(a[np.ix_(rest_rows, rest_cols)])
            else:
                sub_total = 0.0
            val = float(a[r, c]) + sub_total
            if best_val is None or val < best_val:
                best_val = val
                best_idx = idx
        chosen.append(cols_left.pop(best_idx))
    return chosen


def hungarian(costs: CostMatrix) -> Matching:
    """Minimum-weight perfect matching with a deterministic tie-break.

    Among equal-cost optima the lexicographically smallest assignment
    (read row by row) wins, so the pure/impure split of clusters is
    reproducible.
    """
    costs.validate()
    cols = _lex_min_assignment(costs.costs)
    total = 0.0
    for i, j in enumerate(cols):
        total += float(costs.costs[i, j])
    pairs = tuple((i, j) for i, j in enumerate(cols))
    pure_in_c1 = frozenset(i for i, j in pairs if i < costs.m1 and j >= costs.m2)
    pure_in_c2 = frozenset(j for i, j in pairs if j < costs.m2 and i >= costs.m1)
    return Matching(
        pairs=pairs,
        total_cost=total,
        pure_in_c1=pure_in_c1,
        pure_in_c2=pure_in_c2,
    )
