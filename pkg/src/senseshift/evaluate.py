"""Scoring against gold annotations.

Binary verdicts are scored with plain accuracy, graded rankings with
the Spearman rank correlation. Both metrics are computed on the words
the two inputs share; callers decide how to report coverage gaps.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Mapping

import numpy as np
from scipy import stats


def read_gold(path) -> dict[str, float]:
    """Parse a two-column answer file: word TAB value, one pair per line.

    Blank lines are ignored. Duplicate words and unparseable values are
    errors; binary files use values 0 and 1, graded files any real.
    """
    out: dict[str, float] = {}
    text = Path(path).read_text(encoding="utf-8")
    for ln, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{path}:{ln}: expected 'word<TAB>value', got {line!r}")
        word, raw = parts[0], parts[1].strip()
        if not word:
            raise ValueError(f"{path}:{ln}: empty word")
        if word in out:
            raise ValueError(f"{path}:{ln}: duplicate word {word!r}")
        try:
            out[word] = float(raw)
        except ValueError:
            raise ValueError(f"{path}:{ln}: bad value {raw!r}") from None
    return out


def accuracy(verdicts: Mapping[str, bool], gold: Mapping[str, bool]) -> float:
    """Fraction of shared words whose booleans agree."""
    overlap = sorted(set(verdicts) & set(gold))
    if not overlap:
        raise ValueError("no overlapping words to score")
    hits = sum(1 for w in overlap if bool(verdicts[w]) == bool(gold[w]))
    return hits / len(overlap)


def spearman(scores: Mapping[str, float], gold: Mapping[str, float]) -> float:
    """Spearman rank correlation over the shared words.

    Defined as the Pearson correlation of averaged ranks. Tie-free
    inputs go through the equivalent closed form 1 - 6*sum(d^2)/(n(n^2-1))
    in exact rational arithmetic, so clean cases come out as exact
    floats; inputs with ties fall back to the general computation.
    """
    overlap = sorted(set(scores) & set(gold))
    if len(overlap) < 2:
        raise ValueError("need at least 2 overlapping words to correlate")
    a = np.array([scores[w] for w in overlap], dtype=np.float64)
    b = np.array([gold[w] for w in overlap], dtype=np.float64)
    ra = stats.rankdata(a, method="average")
    rb = stats.rankdata(b, method="average")
    if np.all(ra == ra[0]) or np.all(rb == rb[0]):
        raise ValueError("rank variance is zero on one side")
    n = len(overlap)
    tie_free = len(np.unique(ra)) == n and len(np.unique(rb)) == n
    if tie_free:
        d2 = int(np.sum((ra.astype(np.int64) - rb.astype(np.int64)) ** 2))
        return float(1 - Fraction(6 * d2, n * (n * n - 1)))
    return float(stats.spearmanr(a, b).statistic)
