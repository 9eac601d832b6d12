"""Relative melody encodings and clip segmentation.

A melody of k notes becomes k-1 elements, each recording the pitch delta
(semitones) and the log2 duration ratio between neighboring notes. Pitch
deltas cancel any constant transposition; log-ratios cancel any uniform
tempo scaling. Encoded sequences are cut into overlapping fixed-length
clips, which later serve as the vertices of the similarity graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import MelodySequence
from .errors import InvalidParamsError, TooShortError


@dataclass(frozen=True, slots=True)
class Element:
    """One transition between neighboring notes.

    The downbeat flag belongs to the later note of the pair: an element
    describes the move into that note.
    """

    dpitch: int
    dlogdur: float
    downbeat: bool


@dataclass(frozen=True, slots=True)
class EncodedSequence:
    """Relative encoding of a melody; element k spans source notes (k, k+1)."""

    piece_id: str
    elements: tuple[Element, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def note_span(self, index: int) -> tuple[int, int]:
        """Source note indices covered by the element at `index`."""
        return index, index + 1


@dataclass(frozen=True, slots=True)
class Clip:
    """A window of consecutive elements; one vertex of the similarity graph."""

    piece_id: str
    start: int
    elements: tuple[Element, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def note_span(self) -> tuple[int, int]:
        """Inclusive note-index range of the source melody this clip covers."""
        return self.start, self.start + len(self.elements)


def encode_relative(seq: MelodySequence) -> EncodedSequence:
    """Encode a melody as pitch deltas and log2 duration ratios."""
    if len(seq) < 2:
        raise TooShortError(f"{seq.id!r} has {len(seq)} notes, need at least 2")
    elements = []
    for prev, cur in zip(seq.notes, seq.notes[1:]):
        ratio = cur.duration / prev.duration
        elements.append(Element(cur.pitch - prev.pitch, math.log2(ratio), cur.downbeat))
    return EncodedSequence(seq.id, tuple(elements))


def segment(enc: EncodedSequence, l: int = 16, r: float = 0.5) -> list[Clip]:
    """Cut an encoded sequence into length-l clips with overlap rate r.

    Starts advance by max(1, round(l*(1-r))). A final window ending at the
    last element is appended when the stride would otherwise skip it, so
    the tail is always covered. A sequence shorter than l yields a single
    clip spanning the whole thing.
    """
    if l < 2:
        raise InvalidParamsError(f"clip length {l} < 2")
    if not 0 <= r < 1:
        raise InvalidParamsError(f"overlap rate {r} outside [0, 1)")
    m = len(enc.elements)
    if m <= l:
        return [Clip(enc.piece_id, 0, enc.elements)]
    step = max(1, round(l * (1 - r)))
    starts = list(range(0, m - l + 1, step))
    if starts[-1] != m - l:
        starts.append(m - l)
    return [Clip(enc.piece_id, s, enc.elements[s : s + l]) for s in starts]
