"""Clip-pair similarity graph, optimal assignment, and the plagiarism degree.

Every clip of one piece is scored against every clip of the other, then a
maximum-weight bipartite matching pairs each clip of the smaller side with
a distinct clip of the larger side. The matched edge weights reduce to a
single plagiarism degree, and the matched spans point back at note ranges
in both pieces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .align import CostParams, edge_weight, edit_distance
from .encode import Clip, encode_relative, segment
from .errors import EmptyInputError, EmptyMatchingError, InvalidParamsError

if TYPE_CHECKING:
    from .config import Config
    from .core import MelodySequence

_INF = float("inf")


@dataclass(frozen=True, slots=True)
class SimilarityGraph:
    """Dense bipartite graph over two clip lists; left is the larger side."""

    left: tuple[Clip, ...]
    right: tuple[Clip, ...]
    weights: tuple[tuple[float, ...], ...]
    swapped: bool  # true when build_graph's second argument became the left side

    @property
    def n(self) -> int:
        return len(self.left)

    @property
    def m(self) -> int:
        return len(self.right)


@dataclass(frozen=True, slots=True)
class MatchedPair:
    """One matched clip pair; spans are inclusive note-index ranges."""

    left: int
    right: int
    weight: float
    left_span: tuple[int, int]
    right_span: tuple[int, int]
    suspect: bool


@dataclass(frozen=True, slots=True)
class MatchReport:
    """Optimal matching plus the aggregated plagiarism degree.

    Pair indices refer to the clip lists in the order compare_pieces (or
    build_graph) received them, regardless of any internal side swap.
    """

    pairs: tuple[MatchedPair, ...]
    degree: float

    def as_dict(self, params: dict | None = None) -> dict:
        out: dict = {
            "degree": self.degree,
            "pairs": [
                {
                    "left_span": list(p.left_span),
                    "right_span": list(p.right_span),
                    "weight": p.weight,
                    "suspect": p.suspect,
                }
                for p in self.pairs
            ],
        }
        if params is not None:
            out["params"] = params
        return out


def build_graph(a: list[Clip], b: list[Clip], p: CostParams) -> SimilarityGraph:
    """Score every clip pair; the larger list becomes the left side."""
    if not a or not b:
        raise EmptyInputError("both clip lists must be non-empty")
    swapped = len(b) > len(a)
    left, right = (b, a) if swapped else (a, b)
    weights = tuple(
        tuple(edge_weight(edit_distance(u, w, p)) for w in right) for u in left
    )
    return SimilarityGraph(tuple(left), tuple(right), weights, swapped)


def _assign(weights: tuple[tuple[float, ...], ...], n: int, m: int) -> list[int]:
    """Kuhn-Munkres with potentials: returns left index matched to each right index.

    Rows are the m right clips, columns the n >= m left clips; maximizing
    weight equals minimizing its negation. Scan order is fixed, so equal
    optima always resolve the same way.
    """
    u = [0.0] * (m + 1)
    v = [0.0] * (n + 1)
    match = [0] * (n + 1)  # column -> row, 1-based; 0 means free
    way = [0] * (n + 1)
    for row in range(1, m + 1):
        match[0] = row
        j0 = 0
        minv = [_INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            row0 = match[j0]
            delta = _INF
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cost = -weights[j - 1][row0 - 1] - u[row0] - v[j]
                if cost < minv[j]:
                    minv[j] = cost
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
    row_to_col = [0] * m
    for j in range(1, n + 1):
        if match[j]:
            row_to_col[match[j] - 1] = j - 1
    return row_to_col


def solve_assignment(g: SimilarityGraph, q: float = 1.0, theta: float = 0.45) -> MatchReport:
    """Optimal matching of all right clips; degree is the top-q mean of weights."""
    assignment = _assign(g.weights, g.n, g.m)
    pairs = []
    for right_idx, left_idx in enumerate(assignment):
        weight = g.weights[left_idx][right_idx]
        left_clip = g.left[left_idx]
        right_clip = g.right[right_idx]
        a_idx, b_idx = (right_idx, left_idx) if g.swapped else (left_idx, right_idx)
        a_clip, b_clip = (right_clip, left_clip) if g.swapped else (left_clip, right_clip)
        pairs.append(
            MatchedPair(
                a_idx, b_idx, weight, a_clip.note_span(), b_clip.note_span(),
                weight >= theta,
            )
        )
    pairs.sort(key=lambda pair: (pair.left, pair.right))
    degree = plagiarism_degree([p.weight for p in pairs], q)
    return MatchReport(tuple(pairs), degree)


def plagiarism_degree(weights: list[float], q: float = 1.0) -> float:
    """Mean of the top ceil(q*m) matched edge weights."""
    if not weights:
        raise EmptyMatchingError("no matched edges to aggregate")
    if not 0 < q <= 1:
        raise InvalidParamsError(f"q {q} outside (0, 1]")
    k = math.ceil(q * len(weights))
    top = sorted(weights, reverse=True)[:k]
    return sum(top) / k


def match_pieces(
    a: "MelodySequence", b: "MelodySequence", cfg: "Config"
) -> tuple[SimilarityGraph, MatchReport]:
    """Full pipeline keeping the intermediate graph (for reports and figures)."""
    clips_a = segment(encode_relative(a), cfg.l, cfg.r)
    clips_b = segment(encode_relative(b), cfg.l, cfg.r)
    graph = build_graph(clips_a, clips_b, cfg.cost_params())
    return graph, solve_assignment(graph, cfg.q, cfg.theta)


def compare_pieces(a: "MelodySequence", b: "MelodySequence", cfg: "Config") -> MatchReport:
    """Encode, segment, score, and match two pieces."""
    return match_pieces(a, b, cfg)[1]
