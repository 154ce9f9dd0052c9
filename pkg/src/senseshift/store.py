"""On-disk interchange format for per-word, per-corpus occurrence embeddings.

A payload file holds all occurrence vectors of one word in one corpus:
a 16-byte header (magic ``SSTE``, then format version, dim and count as
32-bit little-endian unsigned integers) followed by ``count * dim``
32-bit little-endian IEEE-754 floats in row-major occurrence order.
A JSON manifest lists the payload files of a corpus pair.

Storage is float32 (what extractors emit); all downstream math promotes
to float64. Occurrence order is preserved but carries no meaning.
Reads are safe from multiple threads; writes to one path are exclusive.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    BadMagicError,
    DimMismatchError,
    InvariantError,
    ManifestError,
    MissingWordError,
    NonFiniteError,
    TruncatedPayloadError,
)

MAGIC = b"SSTE"
FORMAT_VERSION = 1
CORPORA = ("C1", "C2")

_HEADER = struct.Struct("<4sIII")  # magic, format_version, dim, count


@dataclass(eq=False)
class EmbeddingSet:
    """All occurrence vectors of one target word in one corpus.

    ``vectors`` is a ``(count, dim)`` float32 array, one row per occurrence.
    """

    word: str
    corpus: str
    vectors: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.vectors, dtype=np.float32)
        object.__setattr__(self, "vectors", arr)
        self.validate()

    @property
    def dim(self) -> int:
        return int(self.vectors.shape[1])

    @property
    def count(self) -> int:
        return int(self.vectors.shape[0])

    def validate(self) -> None:
        if self.corpus not in CORPORA:
            raise InvariantError(f"corpus must be one of {CORPORA}, got {self.corpus!r}")
        if self.vectors.ndim != 2:
            raise InvariantError("vectors must be a 2-D (count, dim) array")
        if self.vectors.shape[1] < 1:
            raise InvariantError("embedding dimension must be positive")
        if not np.all(np.isfinite(self.vectors)):
            raise InvariantError(f"non-finite component in vectors of {self.word!r}/{self.corpus}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddingSet):
            return NotImplemented
        return (
            self.word == other.word
            and self.corpus == other.corpus
            and self.vectors.shape == other.vectors.shape
            and np.array_equal(self.vectors, other.vectors)
        )


def write_embedding_set(embedding_set: EmbeddingSet, path: str | Path) -> None:
    """Write one embedding set to ``path`` in the binary payload format."""
    embedding_set.validate()
    header = _HEADER.pack(MAGIC, FORMAT_VERSION, embedding_set.dim, embedding_set.count)
    payload = np.ascontiguousarray(embedding_set.vectors, dtype="<f4").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def read_embedding_set(path: str | Path, word: str = "", corpus: str = "C1") -> EmbeddingSet:
    """Read one embedding set from ``path``.

    ``word`` and ``corpus`` identify the set; when loading through a
    manifest they come from the entry that references the path.
    """
    data = Path(path).read_bytes()
    if data[:4] != MAGIC:
        raise BadMagicError(f"{path}: expected magic {MAGIC!r}, got {data[:4]!r}")
    if len(data) < _HEADER.size:
        raise TruncatedPayloadError(f"{path}: header truncated ({len(data)} bytes)")
    _, version, dim, count = _HEADER.unpack_from(data)
    if version != FORMAT_VERSION:
        raise ManifestError(f"{path}: unsupported format version {version}")
    if dim < 1:
        raise InvariantError(f"{path}: header dim must be positive, got {dim}")
    expected = count * dim * 4
    payload = data[_HEADER.size :]
    if len(payload) != expected:
        raise TruncatedPayloadError(
            f"{path}: payload is {len(payload)} bytes, header promises {expected}"
        )
    vectors = np.frombuffer(payload, dtype="<f4").reshape(count, dim).copy()
    if not np.all(np.isfinite(vectors)):
        raise NonFiniteError(f"{path}: payload contains NaN or infinite floats")
    return EmbeddingSet(word=word, corpus=corpus, vectors=vectors)


@dataclass
class ManifestEntry:
    word: str
    corpus: str
    path: str
    count: int
    dim: int


@dataclass
class Manifest:
    """Index of payload files for one corpus pair.

    ``root`` is the directory relative paths are resolved against
    (the manifest file's own directory when loaded from disk).
    """

    entries: list[ManifestEntry] = field(default_factory=list)
    format_version: int = FORMAT_VERSION
    root: Path = field(default_factory=lambda: Path("."))

    def validate(self) -> None:
        seen: set[tuple[str, str]] = set()
        for entry in self.entries:
            if entry.corpus not in CORPORA:
                raise ManifestError(f"entry {entry.word!r}: bad corpus {entry.corpus!r}")
            key = (entry.word, entry.corpus)
            if key in seen:
                raise ManifestError(f"duplicate manifest entry for {key}")
            seen.add(key)

    def entry_for(self, word: str, corpus: str) -> ManifestEntry | None:
        for entry in self.entries:
            if entry.word == word and entry.corpus == corpus:
                return entry
        return None

    def words(self) -> list[str]:
        """Sorted target words present in both corpora."""
        by_corpus = {c: {e.word for e in self.entries if e.corpus == c} for c in CORPORA}
        return sorted(by_corpus["C1"] & by_corpus["C2"])

    def unmatched_words(self) -> list[str]:
        """Words listed for only one corpus (a valid manifest has none)."""
        by_corpus = {c: {e.word for e in self.entries if e.corpus == c} for c in CORPORA}
        return sorted(by_corpus["C1"] ^ by_corpus["C2"])

    def resolve(self, entry: ManifestEntry) -> Path:
        p = Path(entry.path)
        return p if p.is_absolute() else self.root / p


def load_manifest(path: str | Path) -> Manifest:
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    if not isinstance(raw, dict) or "entries" not in raw:
        raise ManifestError(f"{path}: manifest must be an object with an 'entries' list")
    version = raw.get("format_version")
    if version != FORMAT_VERSION:
        raise ManifestError(f"{path}: unsupported manifest format_version {version!r}")
    entries = []
    for item in raw["entries"]:
        try:
            entries.append(
                ManifestEntry(
                    word=str(item["word"]),
                    corpus=str(item["corpus"]),
                    path=str(item["path"]),
                    count=int(item["count"]),
                    dim=int(item["dim"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ManifestError(f"{path}: malformed entry {item!r}") from exc
    manifest = Manifest(entries=entries, format_version=version, root=path.parent)
    manifest.validate()
    return manifest


def save_manifest(manifest: Manifest, path: str | Path) -> None:
    manifest.validate()
    doc = {
        "format_version": manifest.format_version,
        "entries": [
            {"word": e.word, "corpus": e.corpus, "path": e.path, "count": e.count, "dim": e.dim}
            for e in manifest.entries
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_word_pair(manifest: Manifest, word: str) -> tuple[EmbeddingSet, EmbeddingSet]:
    """Load the (C1, C2) embedding sets of ``word``, checking consistency."""
    entry1 = manifest.entry_for(word, "C1")
    entry2 = manifest.entry_for(word, "C2")
    if entry1 is None or entry2 is None:
        missing = [c for c, e in (("C1", entry1), ("C2", entry2)) if e is None]
        raise MissingWordError(f"word {word!r} missing from {' and '.join(missing)}")
    if entry1.dim != entry2.dim:
        raise DimMismatchError(
            f"word {word!r}: dim {entry1.dim} in C1 but {entry2.dim} in C2"
        )
    sets = []
    for entry in (entry1, entry2):
        es = read_embedding_set(manifest.resolve(entry), word=word, corpus=entry.corpus)
        if es.count != entry.count or es.dim != entry.dim:
            raise ManifestError(
                f"{entry.path}: file holds count={es.count}, dim={es.dim}; "
                f"manifest says count={entry.count}, dim={entry.dim}"
            )
        sets.append(es)
    return sets[0], sets[1]
