"""Standard MIDI File ingestion (formats 0 and 1, ticks-per-quarter timing).

Parses only what melody extraction needs: note on/off events and time
signature meta events. Chunk layout is big-endian per the SMF spec; unknown
chunk types are skipped. Percussion (channel 10) is ignored, and polyphony
is reduced to a monophonic line by keeping the highest pitch at each onset
and truncating notes at the next onset.
"""

from __future__ import annotations

from fractions import Fraction

from .core import DEFAULT_TIMESIG, MelodySequence, Note, derive_downbeats
from .errors import EmptyMelodyError, MalformedFileError, UnsupportedDivisionError

_PERCUSSION_CHANNEL = 9  # MIDI channel 10, zero-indexed


class _Reader:
    """Byte cursor with big-endian integer and VLQ reads."""

    def __init__(self, data: bytes, start: int = 0, end: int | None = None):
        self.data = data
        self.pos = start
        self.end = len(data) if end is None else end

    def remaining(self) -> int:
        return self.end - self.pos

    def u8(self) -> int:
        if self.pos >= self.end:
            raise MalformedFileError("unexpected end of data")
        b = self.data[self.pos]
        self.pos += 1
        return b

    def peek(self) -> int:
        if self.pos >= self.end:
            raise MalformedFileError("unexpected end of data")
        return self.data[self.pos]

    def be(self, n: int) -> int:
        if self.remaining() < n:
            raise MalformedFileError("unexpected end of data")
        value = int.from_bytes(self.data[self.pos : self.pos + n], "big")
        self.pos += n
        return value

    def skip(self, n: int) -> None:
        if self.remaining() < n:
            raise MalformedFileError("chunk overruns file")
        self.pos += n

    def vlq(self) -> int:
        value = 0
        for i in range(4):
            b = self.u8()
            value = (value << 7) | (b & 0x7F)
            if not b & 0x80:
                return value
        raise MalformedFileError("variable-length quantity longer than 4 bytes")


def _parse_track(
    reader: _Reader,
    notes: list[tuple[int, int, int]],
    timesigs: list[tuple[int, int, int]],
) -> None:
    """Collect (onset_tick, pitch, duration_ticks) and time signatures from one track."""
    tick = 0
    running_status: int | None = None
    open_notes: dict[tuple[int, int], list[int]] = {}

    def close(channel: int, pitch: int, at_tick: int) -> None:
        onsets = open_notes.get((channel, pitch))
        if not onsets:
            return  # stray note-off; tolerated
        onset = onsets.pop(0)
        if channel != _PERCUSSION_CHANNEL and at_tick > onset:
            notes.append((onset, pitch, at_tick - onset))

    while reader.remaining() > 0:
        tick += reader.vlq()
        status = reader.peek()
        if status >= 0x80:
            reader.u8()
            if status < 0xF0:
                running_status = status
            else:
                running_status = None
        else:
            if running_status is None:
                raise MalformedFileError("data byte without running status")
            status = running_status

        if status == 0xFF:
            meta_type = reader.u8()
            length = reader.vlq()
            if reader.remaining() < length:
                raise MalformedFileError("meta event overruns track")
            if meta_type == 0x58 and length >= 2:
                numerator = reader.data[reader.pos]
                denominator = 1 << reader.data[reader.pos + 1]
                timesigs.append((tick, numerator, denominator))
            reader.skip(length)
            if meta_type == 0x2F:
                break
        elif status in (0xF0, 0xF7):
            reader.skip(reader.vlq())
        elif status >= 0xF0:
            raise MalformedFileError(f"unsupported system message 0x{status:02x}")
        else:
            kind = status & 0xF0
            channel = status & 0x0F
            if kind in (0xC0, 0xD0):
                reader.u8()
                continue
            data1 = reader.u8()
            data2 = reader.u8()
            if data1 > 0x7F or data2 > 0x7F:
                raise MalformedFileError("data byte with high bit set")
            if kind == 0x90 and data2 > 0:
                open_notes.setdefault((channel, data1), []).append(tick)
            elif kind == 0x80 or (kind == 0x90 and data2 == 0):
                close(channel, data1, tick)

    # notes never switched off sound until the end of the track
    for (channel, pitch), onsets in open_notes.items():
        for onset in onsets:
            if channel != _PERCUSSION_CHANNEL and tick > onset:
                notes.append((onset, pitch, tick - onset))


def _skyline(notes: list[tuple[int, int, int]]) -> list[tuple[int, int, int]]:
    """Monophonic reduction: highest pitch per onset, truncated at the next onset."""
    by_onset: dict[int, tuple[int, int]] = {}
    for onset, pitch, dur in notes:
        best = by_onset.get(onset)
        if best is None or pitch > best[0]:
            by_onset[onset] = (pitch, dur)
    line = []
    onsets = sorted(by_onset)
    for i, onset in enumerate(onsets):
        pitch, dur = by_onset[onset]
        if i + 1 < len(onsets):
            dur = min(dur, onsets[i + 1] - onset)
        line.append((onset, pitch, dur))
    return line


def parse_midi(data: bytes, piece_id: str = "piece") -> MelodySequence:
    """Extract the monophonic melody of a format 0 or 1 SMF byte blob."""
    reader = _Reader(data)
    if reader.remaining() < 14 or reader.be(4) != int.from_bytes(b"MThd", "big"):
        raise MalformedFileError("missing MThd header")
    header_len = reader.be(4)
    if header_len < 6:
        raise MalformedFileError(f"header length {header_len} < 6")
    smf_format = reader.be(2)
    ntrks = reader.be(2)
    division = reader.be(2)
    reader.skip(header_len - 6)
    if smf_format not in (0, 1):
        raise MalformedFileError(f"unsupported SMF format {smf_format}")
    if division & 0x8000:
        raise UnsupportedDivisionError("SMPTE division is not supported")
    tpq = division
    if tpq == 0:
        raise MalformedFileError("zero ticks per quarter note")

    notes: list[tuple[int, int, int]] = []
    timesigs: list[tuple[int, int, int]] = []
    tracks_seen = 0
    while tracks_seen < ntrks:
        if reader.remaining() < 8:
            raise MalformedFileError(f"expected {ntrks} tracks, found {tracks_seen}")
        chunk_id = reader.be(4)
        length = reader.be(4)
        if reader.remaining() < length:
            raise MalformedFileError("chunk overruns file")
        if chunk_id == int.from_bytes(b"MTrk", "big"):
            _parse_track(_Reader(reader.data, reader.pos, reader.pos + length), notes, timesigs)
            tracks_seen += 1
        reader.skip(length)

    line = _skyline(notes)
    if not line:
        raise EmptyMelodyError("no melody notes found")

    sig_by_tick = {tick: (num, den) for tick, num, den in sorted(timesigs)}
    timesig = [
        (Fraction(tick, tpq), Fraction(num * 4, den))
        for tick, (num, den) in sorted(sig_by_tick.items())
    ]
    if not timesig or timesig[0][0] > 0:
        timesig = [DEFAULT_TIMESIG[0], *timesig]

    melody = MelodySequence(
        piece_id,
        tuple(
            Note(pitch, Fraction(dur, tpq), False, Fraction(onset, tpq))
            for onset, pitch, dur in line
        ),
        tuple(timesig),
    )
    return derive_downbeats(melody)
