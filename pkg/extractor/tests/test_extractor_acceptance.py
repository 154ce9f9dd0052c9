"""Acceptance gate for the extractor, one test per criterion.

Criterion: with a 768-hidden encoder and the default four concatenated
layers the emitted dimensionality is 3072; subtoken averaging verifies
at 1e-5 relative on ten constructed multi-piece words; and the emitted
files round-trip through the primary toolkit's reader and manifest.
"""

import numpy as np

from senseshift import Manifest, load_manifest, load_word_pair, save_manifest
from senseshift_extractor import ExtractionConfig, extract, verify_subtoken_averaging

from conftest import MULTI_PIECE_WORDS


def test_criterion_9_dim_subtoken_averaging_round_trip(tmp_path, wide):
    config = ExtractionConfig(target_words=tuple(MULTI_PIECE_WORDS))
    lines = [f"the {word} sat on the mat ." for word in MULTI_PIECE_WORDS]
    out_dir = tmp_path / "emb"
    entries = []
    for corpus in ("C1", "C2"):
        corpus_file = tmp_path / f"{corpus}.txt"
        corpus_file.write_text("\n".join(lines) + "\n", encoding="utf-8")
        result = extract(
            corpus_file, corpus, config, out_dir, model=wide.model, tokenizer=wide.tokenizer
        )
        assert result.dim == 4 * wide.hidden == 3072
        assert sorted(e.word for e in result.entries) == sorted(MULTI_PIECE_WORDS)
        entries.extend(result.entries)

    save_manifest(Manifest(entries=entries), out_dir / "manifest.json")
    manifest = load_manifest(out_dir / "manifest.json")
    assert manifest.words() == sorted(MULTI_PIECE_WORDS)
    for word in manifest.words():
        for es in load_word_pair(manifest, word):
            assert es.dim == 3072
            assert es.count == 1
            assert es.vectors.dtype == np.float32
            assert np.all(np.isfinite(es.vectors))

    for word in MULTI_PIECE_WORDS:
        assert len(wide.tokenizer.tokenize(word)) >= 2
        status = verify_subtoken_averaging(
            f"the {word} sat on the mat .",
            word,
            config,
            model=wide.model,
            tokenizer=wide.tokenizer,
        )
        assert status == "PASS"
