"""N-gram similarity baselines: Sum Common, Ukkonen, TF-IDF cosine, Tversky.

All four operate on profiles of contiguous pitch-delta n-grams, so they
inherit transposition invariance but see whole pieces rather than aligned
clips. Ukkonen's count distance is folded into a similarity so that a
higher score always means more similar, matching the other measures.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from .encode import EncodedSequence
from .errors import (
    AllZeroWeightsError,
    BothEmptyError,
    EmptyListError,
    InvalidOrderError,
    MissingFileError,
)

NGram = tuple[int, ...]


@dataclass(frozen=True, slots=True)
class NGramProfile:
    """Counts of the contiguous dpitch n-grams of one piece."""

    piece_id: str
    n: int
    counts: dict[NGram, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


@dataclass(frozen=True, slots=True)
class CorpusStats:
    """Document frequencies over a fixed candidate corpus."""

    n_corpus: int
    doc_freq: dict[NGram, int]
    order: int
    piece_ids: tuple[str, ...]


def profile(enc: EncodedSequence, n: int) -> NGramProfile:
    """N-gram counts of the pitch-delta sequence; empty if shorter than n."""
    if n < 1:
        raise InvalidOrderError(f"n-gram order {n} < 1")
    deltas = [e.dpitch for e in enc.elements]
    grams = Counter(
        tuple(deltas[i : i + n]) for i in range(len(deltas) - n + 1)
    )
    return NGramProfile(enc.piece_id, n, dict(grams))


def sum_common(pa: NGramProfile, pb: NGramProfile) -> float:
    """Total count mass on shared n-grams, normalized to [0, 1]."""
    ta, tb = pa.total, pb.total
    if ta == 0 and tb == 0:
        raise BothEmptyError("both profiles are empty")
    shared = sum(
        pa.counts[g] + pb.counts[g] for g in pa.counts.keys() & pb.counts.keys()
    )
    return shared / (ta + tb)


def ukkonen(pa: NGramProfile, pb: NGramProfile) -> float:
    """1 minus the normalized L1 count distance; 1 for identical profiles."""
    ta, tb = pa.total, pb.total
    if ta == 0 and tb == 0:
        raise BothEmptyError("both profiles are empty")
    diff = sum(
        abs(pa.counts.get(g, 0) - pb.counts.get(g, 0))
        for g in pa.counts.keys() | pb.counts.keys()
    )
    return 1.0 - diff / (ta + tb)


def build_stats(profiles: list[NGramProfile]) -> CorpusStats:
    """Document frequencies from one profile per corpus piece."""
    if not profiles:
        raise EmptyListError("corpus stats need at least one profile")
    doc_freq: Counter[NGram] = Counter()
    for p in profiles:
        doc_freq.update(p.counts.keys())
    return CorpusStats(
        len(profiles),
        dict(doc_freq),
        profiles[0].n,
        tuple(sorted(p.piece_id for p in profiles)),
    )


def idf(stats: CorpusStats, gram: NGram) -> float:
    """ln(corpus size / document frequency); unseen n-grams count as seen once."""
    return math.log(stats.n_corpus / stats.doc_freq.get(gram, 1))


def tfidf_correlation(pa: NGramProfile, pb: NGramProfile, stats: CorpusStats) -> float:
    """Cosine of the IDF-weighted count vectors; 0 if either is all zero."""
    grams = pa.counts.keys() | pb.counts.keys()
    dot = norm_a = norm_b = 0.0
    for g in grams:
        w = idf(stats, g)
        va = pa.counts.get(g, 0) * w
        vb = pb.counts.get(g, 0) * w
        dot += va * vb
        norm_a += va * va
        norm_b += vb * vb
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    return dot / math.sqrt(norm_a * norm_b)


def tversky_equal(pa: NGramProfile, pb: NGramProfile, stats: CorpusStats) -> float:
    """Tversky ratio with alpha = beta = 1 over IDF-weighted n-gram sets."""
    sa, sb = pa.counts.keys(), pb.counts.keys()
    inter = sum(idf(stats, g) for g in sa & sb)
    only_a = sum(idf(stats, g) for g in sa - sb)
    only_b = sum(idf(stats, g) for g in sb - sa)
    denom = inter + only_a + only_b
    if denom == 0.0:
        raise AllZeroWeightsError("all n-gram weights are zero")
    return inter / denom


def stats_path(corpus_dir: str | Path, n: int) -> Path:
    """Sidecar location for cached corpus stats next to a corpus directory."""
    corpus_dir = Path(corpus_dir)
    return corpus_dir.with_name(f"{corpus_dir.name}.stats-n{n}.json")


def save_stats(stats: CorpusStats, path: str | Path) -> None:
    payload = {
        "n_corpus": stats.n_corpus,
        "order": stats.order,
        "piece_ids": list(stats.piece_ids),
        "doc_freq": {" ".join(map(str, g)): c for g, c in sorted(stats.doc_freq.items())},
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def load_stats(path: str | Path) -> CorpusStats:
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"stats file not found: {path}")
    payload = json.loads(path.read_text())
    doc_freq = {
        tuple(int(x) for x in key.split()): count
        for key, count in payload["doc_freq"].items()
    }
    return CorpusStats(
        payload["n_corpus"], doc_freq, payload["order"], tuple(payload["piece_ids"])
    )
