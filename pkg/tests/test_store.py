"""Binary interchange format and manifest handling."""

import json

import numpy as np
import pytest

from senseshift import (
    EmbeddingSet,
    Manifest,
    ManifestEntry,
    load_manifest,
    load_word_pair,
    read_embedding_set,
    save_manifest,
    write_embedding_set,
)
from senseshift.errors import (
    BadMagicError,
    DimMismatchError,
    ManifestError,
    MissingWordError,
    NonFiniteError,
    TruncatedPayloadError,
)


def _set(word="w", corpus="C1", shape=(5, 4), seed=0):
    rng = np.random.default_rng(seed)
    return EmbeddingSet(word=word, corpus=corpus, vectors=rng.normal(size=shape))


def test_round_trip_preserves_bytes(tmp_path):
    es = _set(shape=(7, 3))
    path = tmp_path / "w.emb"
    write_embedding_set(es, path)
    back = read_embedding_set(path, word="w", corpus="C1")
    assert back == es
    assert back.vectors.dtype == np.float32


def test_round_trip_single_vector(tmp_path):
    es = _set(shape=(1, 1))
    path = tmp_path / "one.emb"
    write_embedding_set(es, path)
    assert read_embedding_set(path, word="w", corpus="C1") == es


def test_vectors_coerced_to_float32():
    es = EmbeddingSet(word="w", corpus="C1", vectors=np.ones((2, 2), dtype=np.float64))
    assert es.vectors.dtype == np.float32
    assert es.dim == 2 and es.count == 2


def test_rejects_bad_corpus_and_shapes():
    with pytest.raises(Exception):
        EmbeddingSet(word="w", corpus="C3", vectors=np.ones((2, 2)))
    with pytest.raises(Exception):
        EmbeddingSet(word="w", corpus="C1", vectors=np.ones(4))
    with pytest.raises(Exception):
        EmbeddingSet(word="w", corpus="C1", vectors=np.full((2, 2), np.nan))


def test_bad_magic_detected(tmp_path):
    path = tmp_path / "bad.emb"
    path.write_bytes(b"NOPE" + b"\x00" * 12)
    with pytest.raises(BadMagicError):
        read_embedding_set(path)


def test_truncated_payload_detected(tmp_path):
    es = _set(shape=(6, 4))
    path = tmp_path / "w.emb"
    write_embedding_set(es, path)
    data = path.read_bytes()
    path.write_bytes(data[:-5])
    with pytest.raises(TruncatedPayloadError):
        read_embedding_set(path)


def test_truncated_header_detected(tmp_path):
    path = tmp_path / "short.emb"
    path.write_bytes(b"SSTE\x01")
    with pytest.raises(TruncatedPayloadError):
        read_embedding_set(path)


def test_non_finite_payload_detected(tmp_path):
    es = _set(shape=(3, 2))
    path = tmp_path / "w.emb"
    write_embedding_set(es, path)
    data = bytearray(path.read_bytes())
    data[16:20] = np.array([np.inf], dtype="<f4").tobytes()
    path.write_bytes(bytes(data))
    with pytest.raises(NonFiniteError):
        read_embedding_set(path)


def _manifest(tmp_path, specs):
    entries = []
    for word, corpus, shape in specs:
        es = _set(word=word, corpus=corpus, shape=shape, seed=hash((word, corpus)) % 100)
        path = tmp_path / f"{word}_{corpus}.emb"
        write_embedding_set(es, path)
        entries.append(
            ManifestEntry(word=word, corpus=corpus, path=path.name, count=shape[0], dim=shape[1])
        )
    manifest_path = tmp_path / "manifest.json"
    save_manifest(Manifest(entries=entries, root=tmp_path), manifest_path)
    return load_manifest(manifest_path)


def test_manifest_round_trip_and_word_sets(tmp_path):
    man = _manifest(
        tmp_path,
        [("a", "C1", (3, 4)), ("a", "C2", (2, 4)), ("b", "C1", (2, 4)), ("c", "C2", (2, 4))],
    )
    assert man.words() == ["a"]
    assert man.unmatched_words() == ["b", "c"]


def test_load_word_pair(tmp_path):
    man = _manifest(tmp_path, [("a", "C1", (3, 4)), ("a", "C2", (2, 4))])
    es1, es2 = load_word_pair(man, "a")
    assert (es1.corpus, es2.corpus) == ("C1", "C2")
    assert es1.count == 3 and es2.count == 2 and es1.dim == es2.dim == 4


def test_load_word_pair_missing_corpus(tmp_path):
    man = _manifest(tmp_path, [("a", "C1", (3, 4))])
    with pytest.raises(MissingWordError, match="C2"):
        load_word_pair(man, "a")


def test_load_word_pair_dim_mismatch(tmp_path):
    man = _manifest(tmp_path, [("a", "C1", (3, 4)), ("a", "C2", (2, 5))])
    with pytest.raises(DimMismatchError):
        load_word_pair(man, "a")


def test_duplicate_manifest_entry_rejected(tmp_path):
    e = ManifestEntry(word="a", corpus="C1", path="x.emb", count=1, dim=2)
    with pytest.raises(ManifestError):
        Manifest(entries=[e, e], root=tmp_path).validate()


def test_malformed_manifest_json(tmp_path):
    path = tmp_path / "manifest.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ManifestError):
        load_manifest(path)
    path.write_text(json.dumps({"format_version": 99, "entries": []}), encoding="utf-8")
    with pytest.raises(ManifestError):
        load_manifest(path)


def test_manifest_entry_disagreeing_with_file(tmp_path):
    es = _set(word="a", corpus="C1", shape=(3, 4))
    write_embedding_set(es, tmp_path / "a_C1.emb")
    es2 = _set(word="a", corpus="C2", shape=(3, 4))
    write_embedding_set(es2, tmp_path / "a_C2.emb")
    entries = [
        ManifestEntry(word="a", corpus="C1", path="a_C1.emb", count=9, dim=4),
        ManifestEntry(word="a", corpus="C2", path="a_C2.emb", count=3, dim=4),
    ]
    man = Manifest(entries=entries, root=tmp_path)
    with pytest.raises(ManifestError):
        load_word_pair(man, "a")
