"""Weighted edit distance between clips and the distance-to-similarity transform.

The substitution cost is music-aware: pitch and duration mismatches are
charged proportionally to their magnitude, and a substitution touching two
downbeat elements costs k_down times more. Distances map to edge weights in
(0, 1] via f(d) = ln(1 + e^-d) / ln 2, which is exactly 1 at d = 0 and
decays monotonically.

The distance is symmetric (when c_ins = c_del) and zero exactly on equal
element sequences, but it is NOT a metric: equality ignores downbeat flags
while the downbeat coefficient inflates substitutions, so a detour through
an off-beat twin of an element can undercut the direct substitution and
break the triangle inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .encode import Clip, Element
from .errors import EmptyClipError, InvalidParamsError

_LN2 = math.log(2.0)


@dataclass(frozen=True, slots=True)
class CostParams:
    """Edit operation costs.

    binary_mismatch replaces the magnitude-based substitution cost with a
    flat 0/1 mismatch charge (ablation switch); the downbeat coefficient
    still applies.
    """

    k_down: float = 2.0
    c_ins: float = 1.0
    c_del: float = 1.0
    pitch_scale: float = 1.0
    dur_scale: float = 1.0
    normalize_by_length: bool = True
    binary_mismatch: bool = False

    def __post_init__(self) -> None:
        if self.k_down < 1:
            raise InvalidParamsError(f"k_down {self.k_down} < 1")
        for name in ("c_ins", "c_del", "pitch_scale", "dur_scale"):
            value = getattr(self, name)
            if not value > 0:
                raise InvalidParamsError(f"{name} must be positive, got {value}")


def substitution_cost(x: Element, y: Element, p: CostParams) -> float:
    """Cost of replacing element x with y; 0 iff dpitch and dlogdur agree."""
    if p.binary_mismatch:
        base = 0.0 if x.dpitch == y.dpitch and x.dlogdur == y.dlogdur else 1.0
    else:
        base = p.pitch_scale * abs(x.dpitch - y.dpitch) + p.dur_scale * abs(
            x.dlogdur - y.dlogdur
        )
    if x.downbeat and y.downbeat:
        return p.k_down * base
    return base


def edit_distance(u: Clip, w: Clip, p: CostParams) -> float:
    """Minimum-cost edit script turning u into w.

    Equal elements (downbeat flags aside) copy for free; otherwise the
    cheapest of delete, insert, substitute applies. With
    normalize_by_length the raw distance is divided by max(|u|, |w|).
    """
    a = u.elements
    b = w.elements
    if not a or not b:
        raise EmptyClipError("edit distance needs two non-empty clips")
    c_ins = p.c_ins
    c_del = p.c_del
    k_down = p.k_down
    pitch_scale = p.pitch_scale
    dur_scale = p.dur_scale
    binary = p.binary_mismatch
    bp = [e.dpitch for e in b]
    bd = [e.dlogdur for e in b]
    bb = [e.downbeat for e in b]
    m = len(b)
    prev = [j * c_ins for j in range(m + 1)]
    cur = [0.0] * (m + 1)
    for i, ea in enumerate(a, start=1):
        ap, ad, ab = ea.dpitch, ea.dlogdur, ea.downbeat
        cur[0] = i * c_del
        for j in range(1, m + 1):
            if ap == bp[j - 1] and ad == bd[j - 1]:
                cur[j] = prev[j - 1]
                continue
            if binary:
                sub = 1.0
            else:
                sub = pitch_scale * abs(ap - bp[j - 1]) + dur_scale * abs(ad - bd[j - 1])
            if ab and bb[j - 1]:
                sub *= k_down
            best = prev[j - 1] + sub
            dele = prev[j] + c_del
            if dele < best:
                best = dele
            ins = cur[j - 1] + c_ins
            if ins < best:
                best = ins
            cur[j] = best
        prev, cur = cur, prev
    distance = prev[m]
    if p.normalize_by_length:
        distance /= max(len(a), m)
    return distance


def edge_weight(d: float) -> float:
    """Similarity f(d) = ln(1 + e^-d) / ln 2; f(0) = 1, strictly decreasing."""
    return math.log1p(math.exp(-d)) / _LN2
