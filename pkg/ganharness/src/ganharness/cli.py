"""Command-line interface: generate / diversity / is / tsne.

Every subcommand takes explicit seeds where randomness is involved, so a
rerun with the same arguments reproduces its output files exactly.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources

from . import __version__
from .diversity import evaluate_diversity, tsne_embed, write_scatter_csv
from .errors import FormatError, GanHarnessError
from .generator import generate_images, load_generator
from .gimg import read_images, write_images
from .latf import read_latent_file
from .metric import DEFAULT_THRESHOLD, PerceptualMetric, inception_score

BUILTIN_CHECKPOINT = "builtin"
_BUILTIN_NAME = "desk_g_v1.ganc"


class _Parser(argparse.ArgumentParser):
    """argparse reserves exit code 2 for usage errors; this CLI keeps 2 for
    I/O problems, so argument errors are remapped onto exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _resolve_checkpoint(spec: str):
    if spec != BUILTIN_CHECKPOINT:
        return load_generator(spec)
    packaged = resources.files("ganharness").joinpath("data", _BUILTIN_NAME)
    with resources.as_file(packaged) as path:
        return load_generator(path)


def _write_json(path, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _cmd_generate(args) -> int:
    ckpt = _resolve_checkpoint(args.checkpoint)
    latent = read_latent_file(args.latent)
    source = args.source if args.source else "unknown"
    batch = generate_images(latent, ckpt, source=source)
    write_images(args.out, batch)
    print(f"generated {batch.count} images from {args.latent} -> {args.out}")
    return 0


def _cmd_diversity(args) -> int:
    batches = [read_images(path) for path in args.images]
    report = evaluate_diversity(
        batches,
        threshold=args.threshold,
        seed=args.seed,
        max_pairs_per_class=args.max_pairs,
        with_inception=args.with_is,
        with_embedding=args.with_tsne,
    )
    for entry in report.sources:
        print(
            f"{entry.source}: {entry.total_similar} similar of "
            f"{entry.total_pairs} pairs (threshold {report.threshold:g})"
        )
        if entry.inception is not None:
            print(
                f"{entry.source}: inception score "
                f"{entry.inception[0]:.3f} +/- {entry.inception[1]:.3f}"
            )
    if args.json:
        report.write_json(args.json)
    if args.csv:
        report.write_csv(args.csv)
    return 0


def _cmd_is(args) -> int:
    batch = read_images(args.images)
    mean, std = inception_score(batch, splits=args.splits, seed=args.seed)
    print(f"{batch.source}: inception score {mean:.4f} +/- {std:.4f} "
          f"({args.splits} splits, {batch.count} images)")
    if args.json:
        _write_json(args.json, {
            "source": batch.source,
            "n_images": batch.count,
            "splits": args.splits,
            "seed": args.seed,
            "mean": mean,
            "std": std,
        })
    return 0


def _cmd_tsne(args) -> int:
    batch = read_images(args.images)
    metric = PerceptualMetric()
    coords = tsne_embed(batch, metric=metric, seed=args.seed,
                        perplexity=args.perplexity)
    write_scatter_csv(args.out, batch, coords)
    print(f"embedded {batch.count} images -> {args.out}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="ganharness",
        description="Conditional image generation and intra-class diversity "
                    "analysis for latent-code files.",
    )
    parser.add_argument("--version", action="version",
                        version=f"ganharness {__version__}")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("generate", help="render a LATF latent file to images")
    p.add_argument("--latent", required=True, help="input LATF path")
    p.add_argument("--checkpoint", default=BUILTIN_CHECKPOINT,
                   help="GANC checkpoint path (default: packaged)")
    p.add_argument("--out", required=True, help="output GIMG path")
    p.add_argument("--source", help="source tag to record (default: unknown)")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("diversity", help="count similar cross-half pairs per class")
    p.add_argument("--images", action="append", required=True,
                   help="GIMG path (repeatable, one per source)")
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--seed", type=int, default=0, help="half-split shuffle seed")
    p.add_argument("--max-pairs", type=int,
                   help="subsample cap on cross-half pairs per class")
    p.add_argument("--with-tsne", action="store_true",
                   help="attach per-image 2-D embedding coordinates")
    p.add_argument("--with-is", action="store_true",
                   help="also compute the inception-style score per source")
    p.add_argument("--json", help="write the full report to this JSON path")
    p.add_argument("--csv", help="write the per-class summary to this CSV path")
    p.set_defaults(func=_cmd_diversity)

    p = sub.add_parser("is", help="inception-style score over splits")
    p.add_argument("--images", required=True, help="GIMG path")
    p.add_argument("--splits", type=int, default=10)
    p.add_argument("--seed", type=int, default=0, help="shuffle seed for splits")
    p.add_argument("--json", help="write the result to this JSON path")
    p.set_defaults(func=_cmd_is)

    p = sub.add_parser("tsne", help="seeded 2-D embedding scatter CSV")
    p.add_argument("--images", required=True, help="GIMG path")
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--perplexity", type=float, default=30.0)
    p.set_defaults(func=_cmd_tsne)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not hasattr(args, "func"):
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"ganharness: format error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"ganharness: i/o error: {exc}", file=sys.stderr)
        return 2
    except GanHarnessError as exc:
        print(f"ganharness: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
