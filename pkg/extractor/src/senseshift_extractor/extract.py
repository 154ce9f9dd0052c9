"""Contextual vector extraction from one-sentence-per-line corpora.

For every occurrence of a target word the extractor emits one vector:
the concatenation of the model's final hidden layers (last layer first)
at the word's position. When the tokenizer splits the word into several
pieces, the emitted vector is the arithmetic mean over the pieces.
Occurrence matching is whitespace tokenization with surrounding
punctuation stripped, exact against the target form (optionally case
folded). Output goes through the senseshift interchange writer, so the
primary toolkit can consume it directly.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch

from senseshift import EmbeddingSet, ManifestEntry, write_embedding_set

DEFAULT_MODEL = "bert-base-uncased"


@dataclass
class ExtractionConfig:
    """Extraction settings.

    ``layers_to_concatenate`` must not exceed the model's encoder depth;
    the emitted dimensionality is that count times the hidden size.
    ``batch_size`` and ``device`` only affect throughput, not values
    (beyond float-level kernel nondeterminism).
    """

    model_name: str = DEFAULT_MODEL
    layers_to_concatenate: int = 4
    target_words: tuple[str, ...] = ()
    max_sequence_length: int = 512
    fold_case: bool = False
    batch_size: int = 16
    device: str = "cpu"

    def validate(self) -> None:
        if self.layers_to_concatenate < 1:
            raise ValueError("layers_to_concatenate must be >= 1")
        if self.max_sequence_length < 4:
            raise ValueError("max_sequence_length must leave room for markers and a word")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        keys = [self._match_key(w) for w in self.target_words]
        if len(set(keys)) != len(keys):
            raise ValueError("target words collide after case folding")

    def _match_key(self, word: str) -> str:
        return word.casefold() if self.fold_case else word


@dataclass
class SkipReport:
    """What truncation cost us: long sentences and the occurrences lost."""

    truncated_sentences: int = 0
    skipped_occurrences: dict[str, int] = field(default_factory=dict)

    def add_skipped(self, word: str, n: int = 1) -> None:
        self.skipped_occurrences[word] = self.skipped_occurrences.get(word, 0) + n

    @property
    def total_skipped(self) -> int:
        return sum(self.skipped_occurrences.values())


@dataclass
class ExtractionResult:
    """Manifest entries for the written files plus the skip report."""

    entries: list[ManifestEntry]
    skip: SkipReport
    dim: int

    def counts(self) -> dict[str, int]:
        return {e.word: e.count for e in self.entries}


@dataclass
class _Occurrence:
    word: str
    start: int  # first piece index in the id sequence (marker at 0)
    end: int  # one past the last piece


def load_model(config: ExtractionConfig):
    from transformers import AutoModel, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(config.model_name)
    model = AutoModel.from_pretrained(config.model_name)
    model.eval()
    return model, tokenizer


def _check_model(model, config: ExtractionConfig) -> int:
    depth = int(model.config.num_hidden_layers)
    if config.layers_to_concatenate > depth:
        raise ValueError(
            f"cannot concatenate {config.layers_to_concatenate} layers, "
            f"model has {depth}"
        )
    return config.layers_to_concatenate * int(model.config.hidden_size)


def _split_token(token: str) -> tuple[str, str, str]:
    core = token.strip(string.punctuation)
    if not core:
        return token, "", ""
    lead_len = len(token) - len(token.lstrip(string.punctuation))
    return token[:lead_len], core, token[lead_len + len(core) :]


def _plan_sentence(
    tokenizer, sentence: str, targets: dict[str, str], config: ExtractionConfig
):
    """Piece the sentence together and locate target occurrences.

    Each whitespace token is tokenized as leading punctuation, core and
    trailing punctuation so the occurrence span covers exactly the core's
    pieces. Returns (ids, occurrences, truncated, lost) where ``lost``
    counts occurrences cut off by truncation per target word.
    """
    pieces: list[str] = []
    matched: list[_Occurrence] = []
    pos = 1  # position 0 is the start marker
    for token in sentence.split():
        lead, core, trail = _split_token(token)
        for part, is_core in ((lead, False), (core, True), (trail, False)):
            if not part:
                continue
            part_pieces = tokenizer.tokenize(part)
            if is_core and part_pieces:
                key = config._match_key(part)
                word = targets.get(key)
                if word is not None:
                    matched.append(_Occurrence(word, pos, pos + len(part_pieces)))
            pieces.extend(part_pieces)
            pos += len(part_pieces)

    limit = config.max_sequence_length - 2
    truncated = len(pieces) > limit
    if truncated:
        pieces = pieces[:limit]
    kept, lost = [], {}
    for occ in matched:
        if occ.end <= len(pieces) + 1:
            kept.append(occ)
        else:
            lost[occ.word] = lost.get(occ.word, 0) + 1
    ids = tokenizer.convert_tokens_to_ids(
        [tokenizer.cls_token] + pieces + [tokenizer.sep_token]
    )
    return ids, kept, truncated, lost


def _concat_last_layers(hidden_states, layers: int) -> torch.Tensor:
    return torch.cat([hidden_states[-i] for i in range(1, layers + 1)], dim=-1)


def _slug(word: str, used: set[str]) -> str:
    base = "".join(ch if ch.isalnum() or ch in "_-" else "-" for ch in word) or "word"
    slug = base
    counter = 2
    while slug in used:
        slug = f"{base}-{counter}"
        counter += 1
    used.add(slug)
    return slug


def extract(
    corpus_path,
    corpus: str,
    config: ExtractionConfig,
    out_dir,
    model=None,
    tokenizer=None,
) -> ExtractionResult:
    """Extract occurrence vectors for one corpus and write them out.

    Emits one interchange file per target word that occurs at least
    once, named after the word and the corpus label. Vectors appear in
    sentence order, then occurrence order within the sentence.
    """
    config.validate()
    if not config.target_words:
        raise ValueError("no target words configured")
    if model is None or tokenizer is None:
        model, tokenizer = load_model(config)
    dim = _check_model(model, config)
    targets = {config._match_key(w): w for w in config.target_words}

    plans = []
    skip = SkipReport()
    with open(corpus_path, encoding="utf-8") as fh:
        for line in fh:
            sentence = line.rstrip("\n")
            if not sentence.strip():
                continue
            ids, occs, truncated, lost = _plan_sentence(tokenizer, sentence, targets, config)
            if truncated:
                skip.truncated_sentences += 1
                for word, n in lost.items():
                    skip.add_skipped(word, n)
            if occs:
                plans.append((ids, occs))

    device = torch.device(config.device)
    model = model.to(device)
    model.eval()
    pad_id = tokenizer.pad_token_id if tokenizer.pad_token_id is not None else 0
    vectors: dict[str, list[np.ndarray]] = {w: [] for w in config.target_words}
    with torch.no_grad():
        for lo in range(0, len(plans), config.batch_size):
            batch = plans[lo : lo + config.batch_size]
            width = max(len(ids) for ids, _ in batch)
            input_ids = torch.full((len(batch), width), pad_id, dtype=torch.long)
            mask = torch.zeros((len(batch), width), dtype=torch.long)
            for r, (ids, _) in enumerate(batch):
                input_ids[r, : len(ids)] = torch.tensor(ids, dtype=torch.long)
                mask[r, : len(ids)] = 1
            out = model(
                input_ids=input_ids.to(device),
                attention_mask=mask.to(device),
                output_hidden_states=True,
            )
            states = _concat_last_layers(out.hidden_states, config.layers_to_concatenate)
            states = states.cpu().numpy().astype(np.float64)
            for r, (_, occs) in enumerate(batch):
                for occ in occs:
                    vec = states[r, occ.start : occ.end].mean(axis=0)
                    vectors[occ.word].append(vec.astype(np.float32))

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries: list[ManifestEntry] = []
    used_slugs: set[str] = set()
    for word in sorted(vectors):
        vecs = vectors[word]
        if not vecs:
            continue
        es = EmbeddingSet(word=word, corpus=corpus, vectors=np.vstack(vecs))
        filename = f"{_slug(word, used_slugs)}_{corpus}.emb"
        write_embedding_set(es, out_dir / filename)
        entries.append(
            ManifestEntry(word=word, corpus=corpus, path=filename, count=es.count, dim=es.dim)
        )
    return ExtractionResult(entries=entries, skip=skip, dim=dim)


def verify_subtoken_averaging(
    sentence: str,
    word: str,
    config: ExtractionConfig,
    model=None,
    tokenizer=None,
) -> str:
    """Check the emitted vector of one occurrence against its pieces.

    Recomputes each sub-piece vector individually and compares their
    arithmetic mean to the vector the extraction path emits, within
    1e-5 relative per component. Returns "PASS" or "FAIL"; a word the
    tokenizer keeps whole is reported as "NOT_SPLIT" since there is
    nothing to average.
    """
    config.validate()
    if model is None or tokenizer is None:
        model, tokenizer = load_model(config)
    _check_model(model, config)
    targets = {config._match_key(word): word}
    ids, occs, _, lost = _plan_sentence(tokenizer, sentence, targets, config)
    if not occs:
        detail = " (truncated away)" if lost else ""
        raise ValueError(f"{word!r} does not occur in the sentence{detail}")
    occ = occs[0]
    if occ.end - occ.start < 2:
        return "NOT_SPLIT"

    model.eval()
    with torch.no_grad():
        out = model(
            input_ids=torch.tensor([ids], dtype=torch.long), output_hidden_states=True
        )
    states = _concat_last_layers(out.hidden_states, config.layers_to_concatenate)
    states = states[0].cpu().numpy().astype(np.float64)
    emitted = states[occ.start : occ.end].mean(axis=0).astype(np.float32)

    total = np.zeros(states.shape[1], dtype=np.float64)
    for p in range(occ.start, occ.end):
        total = total + states[p]
    reference = total / (occ.end - occ.start)
    bound = 1e-5 * np.maximum(np.abs(reference), np.finfo(np.float64).tiny)
    ok = np.all(np.abs(emitted.astype(np.float64) - reference) <= bound)
    return "PASS" if ok else "FAIL"
