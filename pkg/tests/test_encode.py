"""Relative encoding and clip segmentation."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from melplag.core import scale_durations, transpose
from melplag.encode import Clip, encode_relative, segment
from melplag.errors import InvalidParamsError, TooShortError


def test_encode_pitch_deltas(make_piece):
    enc = encode_relative(make_piece([60, 62, 62, 58]))
    assert [e.dpitch for e in enc.elements] == [2, 0, -4]
    assert [e.dlogdur for e in enc.elements] == [0.0, 0.0, 0.0]


def test_encode_duration_log_ratios(make_piece):
    enc = encode_relative(make_piece([60, 60, 60], [1, 2, 1]))
    assert [e.dlogdur for e in enc.elements] == [1.0, -1.0]
    assert [e.dpitch for e in enc.elements] == [0, 0]


def test_encode_downbeat_from_later_note(make_piece):
    # 4/4, quarter notes: notes 0 and 4 are downbeats
    seq = make_piece([60, 61, 62, 63, 64])
    assert [n.downbeat for n in seq.notes] == [True, False, False, False, True]
    enc = encode_relative(seq)
    assert [e.downbeat for e in enc.elements] == [False, False, False, True]


def test_encode_too_short(make_piece):
    with pytest.raises(TooShortError):
        encode_relative(make_piece([60]))


def test_encode_length_and_note_span(make_piece):
    enc = encode_relative(make_piece([60, 62, 64, 65]))
    assert len(enc) == 3
    assert enc.note_span(0) == (0, 1)
    assert enc.note_span(2) == (2, 3)


def test_transposition_invariance(make_piece):
    seq = make_piece([60, 62, 58, 65, 61], [1, Fraction(1, 2), 1, 2, 1])
    shifted = encode_relative(transpose(seq, 5))
    base = encode_relative(seq)
    assert shifted.elements == base.elements


def test_tempo_invariance(make_piece):
    seq = make_piece([60, 62, 58, 65], [1, Fraction(3, 4), Fraction(1, 2), 2])
    for k in (Fraction(1, 2), 2, Fraction(3, 2)):
        assert encode_relative(scale_durations(seq, k)).elements == encode_relative(seq).elements


def _enc(n, make_piece):
    return encode_relative(make_piece(list(range(60, 60 + n + 1))))


def test_segment_regular_grid(make_piece):
    clips = segment(_enc(10, make_piece), l=4, r=0.5)
    assert [c.start for c in clips] == [0, 2, 4, 6]
    assert all(len(c) == 4 for c in clips)


def test_segment_short_sequence(make_piece):
    clips = segment(_enc(3, make_piece), l=4)
    assert len(clips) == 1
    assert clips[0].start == 0
    assert len(clips[0]) == 3


def test_segment_tail_window(make_piece):
    clips = segment(_enc(9, make_piece), l=4, r=0.5)
    assert [c.start for c in clips] == [0, 2, 4, 5]
    assert all(len(c) == 4 for c in clips)


def test_segment_exact_fit(make_piece):
    clips = segment(_enc(4, make_piece), l=4, r=0.5)
    assert [c.start for c in clips] == [0]


def test_segment_param_validation(make_piece):
    enc = _enc(10, make_piece)
    with pytest.raises(InvalidParamsError):
        segment(enc, l=1)
    with pytest.raises(InvalidParamsError):
        segment(enc, l=4, r=1.0)
    with pytest.raises(InvalidParamsError):
        segment(enc, l=4, r=-0.1)


def test_clip_note_span(make_piece):
    clips = segment(_enc(9, make_piece), l=4, r=0.5)
    assert clips[0].note_span() == (0, 4)
    assert clips[-1].note_span() == (5, 9)


@given(m=st.integers(2, 200), l=st.integers(2, 40), r=st.floats(0, 0.95))
def test_segment_covers_every_element(m, l, r):
    elements = tuple(range(m))  # indices stand in for Elements
    enc = type("E", (), {"piece_id": "p", "elements": elements})()
    clips = segment(enc, l=l, r=r)
    covered = set()
    for c in clips:
        assert isinstance(c, Clip)
        assert c.start + len(c) <= m
        assert 1 <= len(c) <= l
        covered.update(range(c.start, c.start + len(c)))
    assert covered == set(range(m))
    assert [c.start for c in clips] == sorted({c.start for c in clips})
