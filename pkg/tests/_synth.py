"""Synthetic corpus-pair builders shared by the test modules."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from senseshift import EmbeddingSet, Manifest, ManifestEntry, save_manifest, write_embedding_set


def sense_cloud(rng: np.random.Generator, center: np.ndarray, n: int, spread: float = 1.0):
    return center[None, :] + rng.normal(0.0, spread, size=(n, center.shape[0]))


def build_manifest(root: Path, words: dict[str, tuple[np.ndarray, np.ndarray]]) -> Path:
    """Write one embedding file per (word, corpus) plus the manifest JSON."""
    root.mkdir(parents=True, exist_ok=True)
    entries = []
    for word, (vecs1, vecs2) in sorted(words.items()):
        for corpus, vecs in (("C1", vecs1), ("C2", vecs2)):
            es = EmbeddingSet(word=word, corpus=corpus, vectors=np.asarray(vecs, dtype=np.float32))
            path = root / f"{word}_{corpus}.emb"
            write_embedding_set(es, path)
            entries.append(
                ManifestEntry(word=word, corpus=corpus, path=path.name, count=es.count, dim=es.dim)
            )
    manifest_path = root / "manifest.json"
    save_manifest(Manifest(entries=entries, root=root), manifest_path)
    return manifest_path


def planted_benchmark(seed: int = 2024, d: int = 8, separation: float = 20.0, spread: float = 1.0):
    """20 synthetic target words: 10 with a planted gained sense, 10 stable.

    Stable words use two senses shared 25/25 by both corpora. Changed
    words share one 50-occurrence sense and gain a second one: 1 or 2
    occurrences in the first corpus, 30..120 in the second, so the true
    shift grows strictly with the word index. Returns (words, gold_s1,
    gold_s2) where gold_s2 carries the planted graded level.
    """
    rng = np.random.default_rng(seed)
    center_a = np.zeros(d)
    center_b = np.zeros(d)
    center_b[0] = separation
    words: dict[str, tuple[np.ndarray, np.ndarray]] = {}
    gold_s1: dict[str, int] = {}
    gold_s2: dict[str, float] = {}
    for i in range(10):
        word = f"gain{i:02d}"
        g1 = 1 + (i % 2)
        g2 = 30 + 10 * i
        vecs1 = np.vstack(
            [sense_cloud(rng, center_a, 50, spread), sense_cloud(rng, center_b, g1, spread)]
        )
        vecs2 = np.vstack(
            [sense_cloud(rng, center_a, 50, spread), sense_cloud(rng, center_b, g2, spread)]
        )
        words[word] = (vecs1, vecs2)
        gold_s1[word] = 1
        gold_s2[word] = g2 / (50 + g2) - g1 / (50 + g1)
    for i in range(10):
        word = f"stay{i:02d}"
        vecs1 = np.vstack(
            [sense_cloud(rng, center_a, 25, spread), sense_cloud(rng, center_b, 25, spread)]
        )
        vecs2 = np.vstack(
            [sense_cloud(rng, center_a, 25, spread), sense_cloud(rng, center_b, 25, spread)]
        )
        words[word] = (vecs1, vecs2)
        gold_s1[word] = 0
        gold_s2[word] = 0.0
    return words, gold_s1, gold_s2
