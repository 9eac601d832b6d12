"""Ranking evaluation: rank candidate originals for each derived piece.

Every detector returns a similarity score where higher means more similar,
so one ranking routine serves all of them. Metrics follow the usual
retrieval style: ARI is the mean rank of the true original, Accuracy the
fraction of cases ranking it first.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass
from pathlib import Path

from . import baselines
from .baselines import CorpusStats, NGramProfile, build_stats, load_stats, save_stats, stats_path
from .config import Config
from .core import MelodySequence, load_piece
from .datagen import CASE_TYPES, DatasetManifest
from .encode import Clip, encode_relative, segment
from .errors import EmptyInputError, EmptyListError, MelplagError, UnknownDetectorError
from .match import build_graph, solve_assignment

DETECTORS = ("bmm", "sum_common", "ukkonen", "tfidf", "tversky")


@dataclass(frozen=True, slots=True)
class RankingResult:
    """Rank of the true original for one case under one detector."""

    case_id: str
    case_type: str
    detector: str
    rank: int


class _Pool:
    """Per-candidate artifacts computed once and reused across queries."""

    def __init__(self, pieces: list[MelodySequence], cfg: Config, stats: CorpusStats | None = None):
        if not pieces:
            raise EmptyInputError("candidate pool is empty")
        self.ids = [p.id for p in pieces]
        encoded = [encode_relative(p) for p in pieces]
        self.clips: list[list[Clip]] = [segment(e, cfg.l, cfg.r) for e in encoded]
        self.profiles: list[NGramProfile] = [
            baselines.profile(e, cfg.ngram_n) for e in encoded
        ]
        self.stats = stats if stats is not None else build_stats(self.profiles)


def _score_candidates(
    query: MelodySequence, pool: _Pool, detector: str, cfg: Config
) -> list[tuple[str, float]]:
    enc = encode_relative(query)
    scores: list[tuple[str, float]] = []
    if detector == "bmm":
        q_clips = segment(enc, cfg.l, cfg.r)
        params = cfg.cost_params()
        for cid, clips in zip(pool.ids, pool.clips):
            graph = build_graph(q_clips, clips, params)
            report = solve_assignment(graph, cfg.q, cfg.theta)
            scores.append((cid, report.degree))
        return scores
    pq = baselines.profile(enc, cfg.ngram_n)
    if detector == "sum_common":
        score = lambda pc: baselines.sum_common(pq, pc)
    elif detector == "ukkonen":
        score = lambda pc: baselines.ukkonen(pq, pc)
    elif detector == "tfidf":
        score = lambda pc: baselines.tfidf_correlation(pq, pc, pool.stats)
    elif detector == "tversky":
        score = lambda pc: baselines.tversky_equal(pq, pc, pool.stats)
    else:
        raise UnknownDetectorError(f"unknown detector {detector!r}")
    for cid, pc in zip(pool.ids, pool.profiles):
        scores.append((cid, score(pc)))
    return scores


def rank_query(
    query: MelodySequence,
    candidates: list[MelodySequence],
    detector: str,
    cfg: Config,
) -> list[tuple[str, float]]:
    """Candidates ordered by descending score; ties broken by ascending id."""
    if detector not in DETECTORS:
        raise UnknownDetectorError(f"unknown detector {detector!r}")
    pool = _Pool(candidates, cfg)
    scores = _score_candidates(query, pool, detector, cfg)
    return sorted(scores, key=lambda item: (-item[1], item[0]))


def ari(ranks: list[int]) -> float:
    """Average ranking index: the mean rank (lower is better)."""
    if not ranks:
        raise EmptyListError("no ranks to average")
    return sum(ranks) / len(ranks)


def accuracy(ranks: list[int]) -> float:
    """Fraction of cases whose true original ranked first."""
    if not ranks:
        raise EmptyListError("no ranks to average")
    return sum(1 for r in ranks if r == 1) / len(ranks)


def _cached_stats(corpus_dir: Path, fresh: CorpusStats) -> CorpusStats:
    """Reuse the sidecar stats file when it still matches the corpus; else rewrite it."""
    sidecar = stats_path(corpus_dir, fresh.order)
    if sidecar.is_file():
        with contextlib.suppress(Exception):
            cached = load_stats(sidecar)
            if (
                cached.order == fresh.order
                and cached.piece_ids == fresh.piece_ids
                and cached.n_corpus == fresh.n_corpus
            ):
                return cached
    with contextlib.suppress(OSError):
        save_stats(fresh, sidecar)
    return fresh


def evaluate(
    manifest_path: str | Path,
    detectors: list[str],
    cfg: Config,
    corpus_dir: str | Path | None = None,
) -> dict:
    """Run every requested detector over every manifest case.

    Queries are the derived pieces; candidates are the manifest's corpus
    listing. Per-case detector errors are collected, not fatal. When
    corpus_dir is given, corpus files are looked up there by name instead
    of via the manifest's relative paths.
    """
    for det in detectors:
        if det not in DETECTORS:
            raise UnknownDetectorError(f"unknown detector {det!r}")
    manifest_path = Path(manifest_path)
    manifest = DatasetManifest.load(manifest_path)
    base = manifest_path.parent

    def resolve(rel: str) -> Path:
        if corpus_dir is not None:
            return Path(corpus_dir) / Path(rel).name
        return base / rel

    corpus_paths = [resolve(rel) for rel in manifest.corpus]
    pieces = [load_piece(p) for p in corpus_paths]
    id_by_name = {path.name: piece.id for path, piece in zip(corpus_paths, pieces)}

    pool = _Pool(pieces, cfg)
    pool.stats = _cached_stats(corpus_paths[0].parent, pool.stats)

    per_case: list[RankingResult] = []
    errors: list[dict] = []
    queries = []
    for case in manifest.cases:
        derived_path = base / case["derived"]
        true_id = id_by_name.get(Path(case["original"]).name)
        queries.append((case, derived_path, true_id))

    for detector in detectors:
        for case, derived_path, true_id in queries:
            case_id = Path(case["derived"]).stem
            if true_id is None:
                errors.append(
                    {
                        "case": case_id,
                        "detector": detector,
                        "error": f"original {case['original']} not in corpus listing",
                    }
                )
                continue
            try:
                query = load_piece(derived_path)
                scores = _score_candidates(query, pool, detector, cfg)
                ranked = sorted(scores, key=lambda item: (-item[1], item[0]))
                rank = 1 + [cid for cid, _ in ranked].index(true_id)
            except MelplagError as exc:
                errors.append({"case": case_id, "detector": detector, "error": str(exc)})
                continue
            per_case.append(RankingResult(case_id, case["type"], detector, rank))

    results: dict = {}
    for detector in detectors:
        rows = {}
        for case_type in CASE_TYPES:
            ranks = [
                r.rank
                for r in per_case
                if r.detector == detector and r.case_type == case_type
            ]
            if ranks:
                rows[case_type] = {
                    "ari": ari(ranks),
                    "acc": accuracy(ranks),
                    "cases": len(ranks),
                    "ranks": ranks,
                }
        results[detector] = rows

    return {
        "params": cfg.as_dict(),
        "pool_size": len(pieces),
        "results": results,
        "errors": errors,
    }


def format_table(evaluation: dict) -> str:
    """Aligned text table of per-detector, per-type ARI and Accuracy."""
    lines = [f"{'detector':<12} {'type':<18} {'cases':>5} {'ARI':>7} {'Acc':>6}"]
    for detector, rows in evaluation["results"].items():
        for case_type, cell in rows.items():
            lines.append(
                f"{detector:<12} {case_type:<18} {cell['cases']:>5}"
                f" {cell['ari']:>7.2f} {cell['acc']:>6.2f}"
            )
    if evaluation["errors"]:
        lines.append(f"errors: {len(evaluation['errors'])} case(s) skipped")
    return "\n".join(lines) + "\n"
