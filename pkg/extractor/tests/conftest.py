"""Offline fixtures: a tiny WordPiece vocabulary and random-weight encoders.

The vocabulary is built so compounds of cat/dog/mat split into known
pieces (catdogmat -> cat ##dog ##mat), giving hand-checkable alignments
without downloading anything. Weights are randomly initialized from a
fixed torch seed; tests only rely on the model being a deterministic
function, never on particular values.
"""

from types import SimpleNamespace

import pytest
import torch
from transformers import BertConfig, BertModel, BertTokenizer

SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
BASE_WORDS = ["the", "cat", "sat", "on", "mat", "dog", "ran", "home", "big", "red"]
PIECES = ["##dog", "##mat", "##cat", "##s"]
PUNCT = [".", ",", "!", "?", "(", ")", "'", "-"]

MULTI_PIECE_WORDS = [
    "catdog", "catmat", "catcat", "dogcat", "dogdog",
    "dogmat", "matcat", "matdog", "matmat", "catdogmat",
]


def _write_vocab(path):
    path.write_text("\n".join(SPECIALS + BASE_WORDS + PIECES + PUNCT) + "\n", encoding="utf-8")


def _build_model(vocab_size, hidden, depth, intermediate, seed):
    torch.manual_seed(seed)
    config = BertConfig(
        vocab_size=vocab_size,
        hidden_size=hidden,
        num_hidden_layers=depth,
        num_attention_heads=4,
        intermediate_size=intermediate,
        max_position_embeddings=64,
    )
    model = BertModel(config)
    model.eval()
    return model


@pytest.fixture(scope="session")
def tiny(tmp_path_factory):
    """Small fast encoder (hidden 32, depth 6), also saved to disk for CLI runs."""
    root = tmp_path_factory.mktemp("tiny-encoder")
    vocab = root / "vocab.txt"
    _write_vocab(vocab)
    tokenizer = BertTokenizer(str(vocab), do_lower_case=False)
    model = _build_model(tokenizer.vocab_size, 32, 6, 64, seed=0)
    save_dir = root / "saved"
    model.save_pretrained(save_dir)
    tokenizer.save_pretrained(save_dir)
    return SimpleNamespace(
        model=model, tokenizer=tokenizer, hidden=32, depth=6, save_dir=save_dir
    )


@pytest.fixture(scope="session")
def wide(tmp_path_factory):
    """Encoder with the reference hidden size 768 (depth 4 to stay light)."""
    root = tmp_path_factory.mktemp("wide-encoder")
    vocab = root / "vocab.txt"
    _write_vocab(vocab)
    tokenizer = BertTokenizer(str(vocab), do_lower_case=False)
    model = _build_model(tokenizer.vocab_size, 768, 4, 128, seed=1)
    return SimpleNamespace(model=model, tokenizer=tokenizer, hidden=768, depth=4)
