"""Domain types and ingestion for monophonic melodies.

Pitches follow the MIDI convention (semitone numbers 0-127). Durations and
onsets are exact rationals in quarter-note beats: downbeat detection compares
onsets against the measure grid and must never suffer float drift.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .errors import MissingFileError, NotelistSyntaxError, RangeError

# (measure-start beat, beats per measure), sorted by start beat
BeatMap = tuple[tuple[Fraction, Fraction], ...]

DEFAULT_TIMESIG: BeatMap = ((Fraction(0), Fraction(4)),)


def beats(value) -> Fraction:
    """Coerce a beat quantity to an exact Fraction.

    Floats go through their shortest decimal repr, so literals like 0.75
    become exactly 3/4. Strings accept both "0.75" and "3/4".
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise RangeError(f"not a beat quantity: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    if isinstance(value, str):
        return Fraction(value)
    raise RangeError(f"not a beat quantity: {value!r}")


@dataclass(frozen=True, slots=True)
class Note:
    """One melodic event: pitch, duration, downbeat flag and onset."""

    pitch: int
    duration: Fraction
    downbeat: bool = False
    onset: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "duration", beats(self.duration))
        object.__setattr__(self, "onset", beats(self.onset))
        if not isinstance(self.pitch, int) or isinstance(self.pitch, bool):
            raise RangeError(f"pitch must be an integer, got {self.pitch!r}")
        if not 0 <= self.pitch <= 127:
            raise RangeError(f"pitch {self.pitch} outside 0..127")
        if self.duration <= 0:
            raise RangeError(f"duration must be positive, got {self.duration}")
        if self.onset < 0:
            raise RangeError(f"onset must be >= 0, got {self.onset}")


@dataclass(frozen=True, slots=True)
class MelodySequence:
    """Ordered monophonic notes of one piece plus its time-signature map."""

    id: str
    notes: tuple[Note, ...]
    timesig: BeatMap = DEFAULT_TIMESIG

    def __post_init__(self):
        object.__setattr__(self, "notes", tuple(self.notes))
        object.__setattr__(
            self,
            "timesig",
            tuple((beats(at), beats(b)) for at, b in self.timesig) or DEFAULT_TIMESIG,
        )
        if not self.notes:
            raise RangeError("a melody needs at least one note")
        for prev, cur in zip(self.notes, self.notes[1:]):
            if cur.onset <= prev.onset:
                raise RangeError(
                    f"onsets must be strictly increasing ({prev.onset} then {cur.onset})"
                )
        for (at, per) in self.timesig:
            if per <= 0 or at < 0:
                raise RangeError(f"bad time-signature entry ({at}, {per})")
        for (a, _), (b, _) in zip(self.timesig, self.timesig[1:]):
            if b <= a:
                raise RangeError("time-signature entries must be sorted by start beat")

    def __len__(self) -> int:
        return len(self.notes)


class PieceFormat(Enum):
    MIDI = "midi"
    NOTELIST = "notelist"


@dataclass(frozen=True, slots=True)
class PieceManifest:
    """Where a piece lives on disk and how to read it."""

    path: Path
    format: PieceFormat
    id: str

    @classmethod
    def from_path(cls, path: Path | str, piece_id: str | None = None) -> "PieceManifest":
        path = Path(path)
        suffix = path.suffix.lower()
        if suffix in (".mid", ".midi", ".smf"):
            fmt = PieceFormat.MIDI
        elif suffix in (".json", ".notelist"):
            fmt = PieceFormat.NOTELIST
        else:
            raise MissingFileError(f"cannot infer piece format from {path}")
        return cls(path=path, format=fmt, id=piece_id or path.stem)


def _is_downbeat(onset: Fraction, timesig: BeatMap) -> bool:
    active = None
    for at, per in timesig:
        if at <= onset:
            active = (at, per)
        else:
            break
    if active is None:
        return False
    at, per = active
    return (onset - at) % per == 0


def derive_downbeats(seq: MelodySequence) -> MelodySequence:
    """Set each note's downbeat flag from the measure grid of seq.timesig.

    A note is a downbeat iff its onset coincides exactly with a measure
    start; comparison is rational, so 3.999 under 4/4 is not a downbeat.
    """
    notes = tuple(
        Note(n.pitch, n.duration, _is_downbeat(n.onset, seq.timesig), n.onset)
        for n in seq.notes
    )
    return MelodySequence(seq.id, notes, seq.timesig)


def sequence_from_entries(
    piece_id: str,
    entries: Iterable[tuple[int, Fraction, bool | None]],
    timesig: BeatMap = DEFAULT_TIMESIG,
) -> MelodySequence:
    """Build a gap-free sequence from (pitch, duration, downbeat?) entries.

    Onsets are cumulative durations. A None downbeat is derived from the
    grid; an explicit flag is kept verbatim.
    """
    notes = []
    onset = Fraction(0)
    explicit: list[bool | None] = []
    for pitch, dur, db in entries:
        dur = beats(dur)
        notes.append(Note(pitch, dur, False, onset))
        explicit.append(db)
        onset += dur
    seq = derive_downbeats(MelodySequence(piece_id, tuple(notes), timesig))
    fixed = tuple(
        n if db is None else Note(n.pitch, n.duration, db, n.onset)
        for n, db in zip(seq.notes, explicit)
    )
    return MelodySequence(piece_id, fixed, seq.timesig)


def transpose(seq: MelodySequence, semitones: int) -> MelodySequence:
    """Shift every pitch by a constant; raises RangeError if any leaves 0..127."""
    notes = tuple(
        Note(n.pitch + semitones, n.duration, n.downbeat, n.onset) for n in seq.notes
    )
    return MelodySequence(seq.id, notes, seq.timesig)


def scale_durations(seq: MelodySequence, factor) -> MelodySequence:
    """Scale every duration (and onset) by a positive factor; downbeats are re-derived."""
    factor = beats(factor)
    if factor <= 0:
        raise RangeError(f"duration factor must be positive, got {factor}")
    notes = tuple(
        Note(n.pitch, n.duration * factor, n.downbeat, n.onset * factor)
        for n in seq.notes
    )
    return derive_downbeats(MelodySequence(seq.id, notes, seq.timesig))


# --- note-list interchange format ---
#
# {"id": str?, "timesig": [{"at": num, "beats": num}]?,
#  "notes": [{"pitch": int, "dur": num, "downbeat": bool?}, ...]}
#
# Notes are sequential: onset of note k = sum of durations of notes 0..k-1.
# Durations whose exact value cannot survive a float round-trip (e.g. 1/3)
# are written as "n/d" strings; the parser accepts both forms.


def _parse_beat_field(value, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise NotelistSyntaxError(f"{where}: expected a number, got {value!r}")
    try:
        return beats(value)
    except (ValueError, ZeroDivisionError, RangeError):
        raise NotelistSyntaxError(f"{where}: cannot read {value!r} as a beat value")


def parse_notelist(text: str, fallback_id: str = "piece") -> MelodySequence:
    """Parse the note-list interchange format into a MelodySequence."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NotelistSyntaxError(f"line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise NotelistSyntaxError("top level must be a JSON object")
    raw_notes = doc.get("notes")
    if not isinstance(raw_notes, list) or not raw_notes:
        raise NotelistSyntaxError('"notes" must be a non-empty list')

    timesig: BeatMap = DEFAULT_TIMESIG
    if "timesig" in doc:
        raw_ts = doc["timesig"]
        if not isinstance(raw_ts, list) or not raw_ts:
            raise NotelistSyntaxError('"timesig" must be a non-empty list')
        entries = []
        for k, item in enumerate(raw_ts):
            if not isinstance(item, dict) or "at" not in item or "beats" not in item:
                raise NotelistSyntaxError(f'timesig[{k}]: expected {{"at", "beats"}}')
            entries.append(
                (
                    _parse_beat_field(item["at"], f"timesig[{k}].at"),
                    _parse_beat_field(item["beats"], f"timesig[{k}].beats"),
                )
            )
        timesig = tuple(entries)

    entries = []
    for k, rec in enumerate(raw_notes):
        where = f"notes[{k}]"
        if not isinstance(rec, dict):
            raise NotelistSyntaxError(f"{where}: expected an object")
        if "pitch" not in rec or "dur" not in rec:
            raise NotelistSyntaxError(f'{where}: needs "pitch" and "dur"')
        pitch = rec["pitch"]
        if isinstance(pitch, bool) or not isinstance(pitch, int):
            raise NotelistSyntaxError(f"{where}: pitch must be an integer")
        if not 0 <= pitch <= 127:
            raise RangeError(f"{where}: pitch {pitch} outside 0..127")
        dur = _parse_beat_field(rec["dur"], f"{where}.dur")
        if dur <= 0:
            raise RangeError(f"{where}: duration must be positive, got {dur}")
        db = rec.get("downbeat")
        if db is not None and not isinstance(db, bool):
            raise NotelistSyntaxError(f"{where}: downbeat must be a boolean")
        entries.append((pitch, dur, db))

    piece_id = doc.get("id", fallback_id)
    if not isinstance(piece_id, str):
        raise NotelistSyntaxError('"id" must be a string')
    try:
        return sequence_from_entries(piece_id, entries, timesig)
    except RangeError as exc:
        raise NotelistSyntaxError(str(exc)) from exc


def _beat_json(value: Fraction):
    """Exact JSON encoding of a beat quantity: int, float, or "n/d" string."""
    if value.denominator == 1:
        return int(value)
    as_float = float(value)
    if beats(as_float) == value:
        return as_float
    return f"{value.numerator}/{value.denominator}"


def serialize_notelist(seq: MelodySequence) -> str:
    """Render a gap-free sequence in the note-list interchange format.

    Rest gaps between notes are not representable in this format; onsets on
    re-parse are the cumulative durations.
    """
    doc = {
        "id": seq.id,
        "timesig": [
            {"at": _beat_json(at), "beats": _beat_json(per)} for at, per in seq.timesig
        ],
        "notes": [
            {"pitch": n.pitch, "dur": _beat_json(n.duration), "downbeat": n.downbeat}
            for n in seq.notes
        ],
    }
    return json.dumps(doc, indent=2) + "\n"


def load_piece(path: Path | str, piece_id: str | None = None) -> MelodySequence:
    """Read a piece from disk, dispatching on the file extension."""
    manifest = PieceManifest.from_path(path, piece_id)
    if not manifest.path.is_file():
        raise MissingFileError(f"no such piece file: {manifest.path}")
    if manifest.format is PieceFormat.MIDI:
        from .midi import parse_midi

        return parse_midi(manifest.path.read_bytes(), piece_id=manifest.id)
    text = manifest.path.read_text(encoding="utf-8")
    return parse_notelist(text, fallback_id=manifest.id)


def piece_files(directory: Path | str) -> list[Path]:
    """All piece files in a directory, sorted by name for determinism."""
    directory = Path(directory)
    if not directory.is_dir():
        raise MissingFileError(f"no such corpus directory: {directory}")
    out = [
        p
        for p in sorted(directory.iterdir())
        if p.suffix.lower() in (".json", ".notelist", ".mid", ".midi", ".smf")
    ]
    return out
