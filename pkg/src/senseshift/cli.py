"""Command-line entry point for reproducible batch runs.

Subcommands: ``detect`` writes the binary-change answer file, ``rank``
the graded ranking, ``eval`` scores an answer file against gold, and
``inspect`` dumps one word's occurrences with cluster labels and a 2-D
projection. Identical flags and seed give byte-identical answer files,
whatever --jobs is; run reports repeat the full configuration plus a
wall-clock timing that is the one non-reproducible field.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .cluster import ClusterConfig
from .errors import SenseShiftError
from .evaluate import accuracy, read_gold, spearman
from .measures import DecisionThresholds
from .pipeline import BatchResult, PipelineConfig, run_corpus_pair, run_word
from .store import load_manifest, load_word_pair

_MEASURE_BY_FLAG = {"jsd": "sj_distance", "coefficient": "coefficient"}


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--method", choices=("m1", "m2"), default="m1",
                   help="joint clustering (m1) or per-corpus clustering with matching (m2)")
    p.add_argument("--measure", choices=("jsd", "coefficient"), default="jsd",
                   help="graded score: smoothed symmetrized KL (jsd) or change coefficient")
    p.add_argument("--k-max", type=int, default=10, help="largest cluster count tried")
    p.add_argument("--restarts", type=int, default=10, help="seeded initializations per k")
    p.add_argument("--max-iters", type=int, default=300, help="iteration cap per k-means run")
    p.add_argument("--tol", type=float, default=1e-6, help="relative inertia change to stop at")
    p.add_argument("--lower-bound", type=int, default=5,
                   help="occurrences a sense needs on its strong side to witness a change")
    p.add_argument("--upper-bound", type=int, default=2,
                   help="occurrences a sense may have on its weak side and still witness")
    p.add_argument("--strict-zero", action="store_true",
                   help="call a change whenever any cluster is empty on one side")
    p.add_argument("--sigma", type=float, default=1.0, help="smoothing prior mass")
    p.add_argument("--seed", type=int, default=0, help="global seed; per-word seeds derive from it")
    p.add_argument("--jobs", type=int, default=1, help="parallel word-level workers")


def _pipeline_config(args: argparse.Namespace) -> PipelineConfig:
    return PipelineConfig(
        method=args.method,
        s2_measure=_MEASURE_BY_FLAG[args.measure],
        cluster_config=ClusterConfig(
            k_max=args.k_max,
            n_restarts=args.restarts,
            max_iters=args.max_iters,
            tol=args.tol,
            seed=args.seed,
        ),
        thresholds=DecisionThresholds(
            lower_bound=args.lower_bound,
            upper_bound=args.upper_bound,
            strict_zero=args.strict_zero,
        ),
        sigma=args.sigma,
    )


def _config_echo(args: argparse.Namespace, command: str) -> dict:
    return {
        "command": command,
        "manifest": str(args.manifest),
        "method": args.method,
        "measure": args.measure,
        "k_max": args.k_max,
        "restarts": args.restarts,
        "max_iters": args.max_iters,
        "tol": args.tol,
        "lower_bound": args.lower_bound,
        "upper_bound": args.upper_bound,
        "strict_zero": args.strict_zero,
        "sigma": args.sigma,
        "seed": args.seed,
        "jobs": args.jobs,
    }


def _word_record(result) -> dict:
    rec = {
        "word": result.word,
        "changed": result.verdict.changed,
        "witnesses": [
            [w.cluster, w.direction, w.n1, w.n2] for w in result.verdict.witnesses
        ],
        "score": result.score.value,
        "measure": result.score.measure,
        "m": result.m,
        "occupancy": [[int(a), int(b)] for a, b in result.occupancy],
        "matching": None,
    }
    if result.matching is not None:
        rec["matching"] = {
            "pairs": [list(p) for p in result.matching.pairs],
            "total_cost": result.matching.total_cost,
            "pure_in_c1": sorted(result.matching.pure_in_c1),
            "pure_in_c2": sorted(result.matching.pure_in_c2),
        }
    return rec


def _write_report(path: Path, args: argparse.Namespace, command: str,
                  batch: BatchResult, elapsed: float) -> None:
    report = {
        "config": _config_echo(args, command),
        "words": [_word_record(r) for r in batch.results],
        "errors": batch.errors,
        "timing": {"elapsed_seconds": elapsed},
    }
    path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _run_batch(args: argparse.Namespace, command: str) -> tuple[BatchResult, float]:
    manifest = load_manifest(Path(args.manifest))
    unmatched = manifest.unmatched_words()
    if unmatched:
        print(
            f"warning: {len(unmatched)} word(s) present in only one corpus, "
            f"skipped: {', '.join(unmatched)}",
            file=sys.stderr,
        )
    started = time.perf_counter()
    batch = run_corpus_pair(manifest, _pipeline_config(args), jobs=args.jobs)
    elapsed = time.perf_counter() - started
    for word, message in batch.errors.items():
        print(f"warning: {word}: {message}", file=sys.stderr)
    return batch, elapsed


def cmd_detect(args: argparse.Namespace) -> int:
    batch, elapsed = _run_batch(args, "detect")
    lines = [f"{r.word}\t{1 if r.verdict.changed else 0}\n" for r in batch.results]
    Path(args.out).write_text("".join(lines), encoding="utf-8")
    if args.report:
        _write_report(Path(args.report), args, "detect", batch, elapsed)
    return 0 if batch.results else 1


def cmd_rank(args: argparse.Namespace) -> int:
    batch, elapsed = _run_batch(args, "rank")
    lines = [f"{s.word}\t{s.value!r}\n" for s in batch.ranking]
    Path(args.out).write_text("".join(lines), encoding="utf-8")
    if args.report:
        _write_report(Path(args.report), args, "rank", batch, elapsed)
    return 0 if batch.results else 1


def cmd_eval(args: argparse.Namespace) -> int:
    answers = read_gold(Path(args.answers))
    gold = read_gold(Path(args.gold))
    missing = sorted(set(gold) - set(answers))
    if missing:
        print(
            f"warning: {len(missing)} gold word(s) missing from answers, "
            f"excluded: {', '.join(missing)}",
            file=sys.stderr,
        )
    if args.subtask == "1":
        for name, values in (("answers", answers), ("gold", gold)):
            bad = [w for w, v in values.items() if v not in (0.0, 1.0)]
            if bad:
                raise ValueError(f"subtask 1 {name} values must be 0 or 1: {', '.join(sorted(bad))}")
        value = accuracy(
            {w: bool(v) for w, v in answers.items()},
            {w: bool(v) for w, v in gold.items()},
        )
        print(f"accuracy={value!r}")
    else:
        value = spearman(answers, gold)
        print(f"spearman={value!r}")
    return 0


def _projection(X: np.ndarray) -> np.ndarray:
    """First two principal components with a fixed sign convention.

    Each component is flipped so its largest-magnitude loading is
    positive, making coordinates reproducible. Inputs without a second
    informative direction get y = 0.
    """
    centered = X - X.mean(axis=0)
    coords = np.zeros((X.shape[0], 2))
    if X.shape[1] == 1:
        coords[:, 0] = centered[:, 0]
        return coords
    _, svals, vt = np.linalg.svd(centered, full_matrices=False)
    n_dirs = min(2, vt.shape[0])
    for c in range(n_dirs):
        if svals[c] <= svals[0] * 1e-12:
            break
        v = vt[c]
        if v[np.argmax(np.abs(v))] < 0:
            v = -v
        coords[:, c] = centered @ v
    return coords


def cmd_inspect(args: argparse.Namespace) -> int:
    manifest = load_manifest(Path(args.manifest))
    if args.word not in manifest.words():
        raise SenseShiftError(
            f"word {args.word!r} is not present in both corpora of the manifest"
        )
    pair = load_word_pair(manifest, args.word)
    result = run_word(pair, _pipeline_config(args))
    X = np.vstack([pair[0].vectors, pair[1].vectors]).astype(np.float64)
    coords = _projection(X)
    rows = []
    offset = 0
    for corpus, assignments in (("C1", result.assignments_c1), ("C2", result.assignments_c2)):
        for idx, cluster in enumerate(assignments):
            x, y = (float(v) for v in coords[offset + idx])
            rows.append(f"{idx}\t{corpus}\t{int(cluster)}\t{x!r}\t{y!r}\n")
        offset += len(assignments)
    text = "".join(rows)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="senseshift",
        description="Detect and rank lexical semantic change between two corpora.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_detect = sub.add_parser("detect", help="binary change decision per word")
    p_detect.add_argument("manifest", help="manifest JSON listing embedding files")
    p_detect.add_argument("--out", required=True, help="answer file to write (word TAB 0|1)")
    p_detect.add_argument("--report", help="optional JSON run report")
    _add_pipeline_flags(p_detect)
    p_detect.set_defaults(func=cmd_detect)

    p_rank = sub.add_parser("rank", help="graded change ranking")
    p_rank.add_argument("manifest", help="manifest JSON listing embedding files")
    p_rank.add_argument("--out", required=True, help="answer file to write (word TAB score)")
    p_rank.add_argument("--report", help="optional JSON run report")
    _add_pipeline_flags(p_rank)
    p_rank.set_defaults(func=cmd_rank)

    p_eval = sub.add_parser("eval", help="score an answer file against gold")
    p_eval.add_argument("answers", help="answer file (word TAB value)")
    p_eval.add_argument("gold", help="gold file (word TAB value)")
    p_eval.add_argument("--subtask", choices=("1", "2"), required=True,
                        help="1 = accuracy on binary labels, 2 = Spearman on scores")
    p_eval.set_defaults(func=cmd_eval)

    p_inspect = sub.add_parser("inspect", help="per-occurrence clusters and 2-D projection")
    p_inspect.add_argument("manifest", help="manifest JSON listing embedding files")
    p_inspect.add_argument("--word", required=True, help="target word to inspect")
    p_inspect.add_argument("--out", help="output file (default: stdout)")
    _add_pipeline_flags(p_inspect)
    p_inspect.set_defaults(func=cmd_inspect)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SenseShiftError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
