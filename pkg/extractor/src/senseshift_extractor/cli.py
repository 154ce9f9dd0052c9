"""Command-line extraction from a pair of pre-segmented corpora.

Reads two one-sentence-per-line text files, extracts one contextual
vector per target-word occurrence from each, and writes an embedding
directory (payload files plus ``manifest.json``) that the senseshift
toolkit consumes directly. Words found in only one corpus are dropped
from the manifest with a warning, since downstream comparison needs
occurrences on both sides.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from senseshift import Manifest, save_manifest

from .extract import DEFAULT_MODEL, ExtractionConfig, extract, load_model


def read_targets(path: Path) -> tuple[str, ...]:
    words = []
    for line in path.read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if word:
            words.append(word)
    if not words:
        raise ValueError(f"target list {path} is empty")
    return tuple(words)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="senseshift-extract",
        description="Extract per-occurrence contextual vectors for target words.",
    )
    parser.add_argument("corpus1", help="earlier corpus, one sentence per line")
    parser.add_argument("corpus2", help="later corpus, one sentence per line")
    parser.add_argument("--targets", required=True, help="file with one target word per line")
    parser.add_argument("--out-dir", required=True, help="directory for payload files and manifest")
    parser.add_argument("--model", default=DEFAULT_MODEL, help="pretrained encoder name or path")
    parser.add_argument("--layers", type=int, default=4,
                        help="hidden layers concatenated, counted from the last")
    parser.add_argument("--max-seq-len", type=int, default=512,
                        help="piece budget per sentence including markers; longer sentences truncate")
    parser.add_argument("--fold-case", action="store_true",
                        help="match occurrences case-insensitively")
    parser.add_argument("--batch-size", type=int, default=16, help="sentences per forward pass")
    parser.add_argument("--device", default="cpu", help="torch device for the forward passes")
    return parser


def run(args: argparse.Namespace) -> int:
    config = ExtractionConfig(
        model_name=args.model,
        layers_to_concatenate=args.layers,
        target_words=read_targets(Path(args.targets)),
        max_sequence_length=args.max_seq_len,
        fold_case=args.fold_case,
        batch_size=args.batch_size,
        device=args.device,
    )
    config.validate()
    model, tokenizer = load_model(config)
    out_dir = Path(args.out_dir)
    entries = []
    for corpus, path in (("C1", args.corpus1), ("C2", args.corpus2)):
        result = extract(path, corpus, config, out_dir, model=model, tokenizer=tokenizer)
        if result.skip.truncated_sentences:
            print(
                f"warning: {corpus}: {result.skip.truncated_sentences} sentence(s) truncated, "
                f"{result.skip.total_skipped} occurrence(s) skipped",
                file=sys.stderr,
            )
        entries.extend(result.entries)

    by_corpus = {c: {e.word for e in entries if e.corpus == c} for c in ("C1", "C2")}
    one_sided = sorted(by_corpus["C1"] ^ by_corpus["C2"])
    missing = sorted(set(config.target_words) - by_corpus["C1"] - by_corpus["C2"])
    if one_sided:
        print(
            f"warning: {len(one_sided)} word(s) found in only one corpus, "
            f"dropped: {', '.join(one_sided)}",
            file=sys.stderr,
        )
    if missing:
        print(
            f"warning: {len(missing)} target word(s) not found in either corpus: "
            f"{', '.join(missing)}",
            file=sys.stderr,
        )
    kept = [e for e in entries if e.word in (by_corpus["C1"] & by_corpus["C2"])]
    if not kept:
        raise ValueError("no target word occurs in both corpora; nothing to write")
    save_manifest(Manifest(entries=kept), out_dir / "manifest.json")
    total = sum(e.count for e in kept)
    print(f"wrote {len(kept)} embedding set(s), {total} vector(s), dim {result.dim}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
