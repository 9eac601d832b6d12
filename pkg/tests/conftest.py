from fractions import Fraction

import pytest

from melplag.config import Config
from melplag.core import sequence_from_entries


@pytest.fixture
def make_piece():
    """Factory for quick gap-free pieces from pitch/duration lists."""

    def _make(pitches, durations=None, piece_id="test", timesig=None):
        if durations is None:
            durations = [Fraction(1)] * len(pitches)
        entries = [(p, d, None) for p, d in zip(pitches, durations)]
        if timesig is None:
            return sequence_from_entries(piece_id, entries)
        return sequence_from_entries(piece_id, entries, timesig)

    return _make


@pytest.fixture
def cfg():
    return Config()
