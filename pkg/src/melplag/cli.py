"""Command-line interface: compare, rank, gen, eval.

Exit codes: 0 success, 2 input or IO error, 3 usage error. Every report
echoes the tool version and the effective parameters, which come from
built-in defaults, then an optional JSON config file, then flags.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import __version__
from .config import Config, load_config
from .core import MelodySequence, load_piece, piece_files
from .errors import EmptyInputError, InvalidParamsError, MelplagError
from .evalharness import DETECTORS, evaluate, format_table, rank_query
from .datagen import gen_dataset
from .match import MatchReport, match_pieces


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; this tool reserves 2 for input errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


_COUNT_ALIASES = {"t": "transposition", "p": "pitch_shift", "d": "duration_variance"}


def _parse_counts(text: str) -> dict[str, int]:
    counts: dict[str, int] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, value = part.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected name=count, got {part!r}")
        key = _COUNT_ALIASES.get(key.strip(), key.strip())
        try:
            counts[key] = int(value)
        except ValueError:
            raise argparse.ArgumentTypeError(f"count for {key!r} must be an integer")
    if not counts:
        raise argparse.ArgumentTypeError("no counts given")
    return counts


def _parse_detectors(text: str) -> list[str]:
    names = [d.strip() for d in text.split(",") if d.strip()]
    if not names:
        raise argparse.ArgumentTypeError("no detectors given")
    unknown = [d for d in names if d not in DETECTORS]
    if unknown:
        raise argparse.ArgumentTypeError(
            f"unknown detector(s) {', '.join(unknown)}; choose from {', '.join(DETECTORS)}"
        )
    return names


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _add_tuning_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", metavar="FILE", help="JSON config file")
    sub.add_argument("--l", type=int, help="clip length in elements (default 16)")
    sub.add_argument("--r", type=float, help="clip overlap rate in [0,1) (default 0.5)")
    sub.add_argument("--kdown", type=float, help="downbeat substitution multiplier (default 2)")
    sub.add_argument("--ngram", type=int, help="n-gram order for baselines (default 3)")


def build_parser() -> _Parser:
    parser = _Parser(prog="melplag", description="Melodic plagiarism detection")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    compare = commands.add_parser("compare", help="match two pieces clip-by-clip")
    compare.add_argument("file_a", help="first piece (.mid or note-list .json)")
    compare.add_argument("file_b", help="second piece")
    _add_tuning_flags(compare)
    compare.add_argument("--pretty", action="store_true", help="human-readable span table")
    compare.add_argument("--out", metavar="FILE", help="also write the report here")
    compare.add_argument("--figures", metavar="DIR", help="render a weight heatmap into DIR")
    compare.set_defaults(func=_cmd_compare)

    rank = commands.add_parser("rank", help="rank corpus pieces against a query")
    rank.add_argument("query", help="query piece file")
    rank.add_argument("corpus", help="directory of candidate pieces")
    _add_tuning_flags(rank)
    rank.add_argument("--detector", choices=DETECTORS, default="bmm")
    rank.add_argument("--top", type=_positive_int, metavar="K", help="show only the best K")
    rank.add_argument("--out", metavar="FILE", help="also write the listing here")
    rank.set_defaults(func=_cmd_rank)

    gen = commands.add_parser("gen", help="generate simulated plagiarism cases")
    gen.add_argument("--corpus", required=True, help="directory of source pieces")
    gen.add_argument("--seed", type=int, required=True, help="master random seed")
    gen.add_argument(
        "--counts",
        type=_parse_counts,
        default={"transposition": 10, "pitch_shift": 10, "duration_variance": 10},
        help="cases per type, e.g. t=10,p=10,d=10 (aliases t/p/d)",
    )
    gen.add_argument("--out", metavar="DIR", help="output directory (default <corpus>-cases)")
    gen.set_defaults(func=_cmd_gen)

    ev = commands.add_parser("eval", help="rank-based evaluation over a manifest")
    ev.add_argument("--manifest", required=True, help="manifest.json from gen")
    ev.add_argument(
        "--detectors",
        type=_parse_detectors,
        default=["bmm"],
        help=f"comma-separated subset of {','.join(DETECTORS)}",
    )
    ev.add_argument("--corpus", help="directory holding the originals, if relocated")
    _add_tuning_flags(ev)
    ev.add_argument("--out", metavar="FILE", help="write the full JSON results here")
    ev.add_argument("--figures", metavar="DIR", help="render metric bar charts into DIR")
    ev.set_defaults(func=_cmd_eval)

    return parser


def _config_from(args: argparse.Namespace) -> Config:
    overrides = {
        "l": getattr(args, "l", None),
        "r": getattr(args, "r", None),
        "k_down": getattr(args, "kdown", None),
        "ngram_n": getattr(args, "ngram", None),
        "seed": getattr(args, "seed", None),
    }
    return load_config(getattr(args, "config", None), overrides)


def _safe_name(piece_id: str) -> str:
    return re.sub(r"[^\w.-]+", "_", piece_id)


def _pretty_report(a: MelodySequence, b: MelodySequence, report: MatchReport) -> str:
    lines = [
        f"left:   {a.id}",
        f"right:  {b.id}",
        f"degree: {report.degree:.4f}",
        f"{'left notes':<14} {'right notes':<14} {'weight':>8}  suspect",
    ]
    for p in report.pairs:
        left = f"{p.left_span[0]}..{p.left_span[1]}"
        right = f"{p.right_span[0]}..{p.right_span[1]}"
        lines.append(f"{left:<14} {right:<14} {p.weight:>8.4f}  {'yes' if p.suspect else 'no'}")
    return "\n".join(lines)


def _cmd_compare(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    a = load_piece(args.file_a)
    b = load_piece(args.file_b)
    graph, report = match_pieces(a, b, cfg)
    if args.pretty:
        text = _pretty_report(a, b, report)
    else:
        payload = {
            "version": __version__,
            "left": a.id,
            "right": b.id,
            **report.as_dict(params=cfg.as_dict()),
        }
        text = json.dumps(payload, indent=2)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n")
    if args.figures:
        fig_dir = Path(args.figures)
        fig_dir.mkdir(parents=True, exist_ok=True)
        from .figures import save_match_figure

        save_match_figure(
            graph, report, fig_dir / f"match-{_safe_name(a.id)}-vs-{_safe_name(b.id)}.png"
        )
    return 0


def _cmd_rank(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    query = load_piece(args.query)
    paths = piece_files(args.corpus)
    if not paths:
        raise EmptyInputError(f"no piece files in {args.corpus}")
    candidates = [load_piece(p) for p in paths]
    ranked = rank_query(query, candidates, args.detector, cfg)
    if args.top:
        ranked = ranked[: args.top]
    lines = ["rank\tscore\tid"]
    lines += [f"{i}\t{score:.6f}\t{cid}" for i, (cid, score) in enumerate(ranked, start=1)]
    text = "\n".join(lines)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n")
    return 0


def _cmd_gen(args: argparse.Namespace) -> int:
    manifest, manifest_path = gen_dataset(args.corpus, args.counts, args.seed, args.out)
    print(f"{len(manifest.cases)} cases, {len(manifest.corpus)} candidate originals")
    print(manifest_path)
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    cfg = _config_from(args)
    evaluation = evaluate(args.manifest, args.detectors, cfg, corpus_dir=args.corpus)
    payload = {"version": __version__, **evaluation}
    print(format_table(evaluation), end="")
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
    if args.figures:
        fig_dir = Path(args.figures)
        fig_dir.mkdir(parents=True, exist_ok=True)
        from .figures import save_eval_figure

        save_eval_figure(evaluation, fig_dir / "eval-metrics.png")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InvalidParamsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except MelplagError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
