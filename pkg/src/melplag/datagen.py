"""Simulated plagiarism dataset generation.

Three reproducible manipulation types: segment-order shuffling of a whole
piece (transposition), a pitch-shifted fragment spliced into an unrelated
host piece, and a duration-scaled fragment spliced into a host. Every case
is a pure function of its inputs and a seed, and a dataset run records all
parameters in a JSON manifest.

The corpus is split into an originals pool and a hosts pool before any
cases are drawn. Hosts never appear in the manifest's corpus listing, so a
derived piece's host cannot outrank the true original during evaluation.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .core import MelodySequence, load_piece, piece_files, sequence_from_entries, serialize_notelist
from .errors import (
    InsufficientCorpusError,
    InvalidParamsError,
    MissingFileError,
    NoValidShiftError,
    TooShortError,
    UnsupportedTypeError,
)

CASE_TYPES = ("transposition", "pitch_shift", "duration_variance")

DURATION_FACTORS = (Fraction(1, 2), Fraction(3, 4), Fraction(3, 2), Fraction(2))

# fragment sizing for the splice-based types, as a fraction of the original
_FRAGMENT_FRACTION = (0.3, 0.6)

_HOST_FRACTION = 0.15


@dataclass(frozen=True, slots=True)
class PlagiarismCase:
    """One derived piece plus everything needed to regenerate it."""

    type: str
    original_id: str
    derived_id: str
    host_id: str | None
    params: dict
    derived: MelodySequence


@dataclass(frozen=True, slots=True)
class DatasetManifest:
    """Dataset description: candidate pool, cases, and the master seed.

    The corpus listing holds the originals pool only; host pieces are
    referenced per case but are not candidates.
    """

    seed: int
    corpus: tuple[str, ...]
    cases: tuple[dict, ...]

    def as_dict(self) -> dict:
        return {"seed": self.seed, "corpus": list(self.corpus), "cases": list(self.cases)}

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.as_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "DatasetManifest":
        path = Path(path)
        if not path.is_file():
            raise MissingFileError(f"manifest not found: {path}")
        doc = json.loads(path.read_text())
        return cls(doc["seed"], tuple(doc["corpus"]), tuple(doc["cases"]))


def _fragment_span(rng: random.Random, n: int) -> tuple[int, int]:
    """Random contiguous span covering 30-60% of n notes (at least 2)."""
    length = max(2, round(n * rng.uniform(*_FRAGMENT_FRACTION)))
    length = min(length, n)
    start = rng.randrange(n - length + 1)
    return start, length


def gen_transposition(
    orig: MelodySequence, seed: int, derived_id: str | None = None
) -> PlagiarismCase:
    """Cut the piece into 3-5 segments and reassemble them in a shuffled order."""
    if len(orig) < 5:
        raise TooShortError(f"{orig.id!r} has {len(orig)} notes, need at least 5")
    rng = random.Random(seed)
    k = rng.randint(3, 5)
    cuts = sorted(rng.sample(range(1, len(orig)), k - 1))
    bounds = [0, *cuts, len(orig)]
    segments = [orig.notes[bounds[i] : bounds[i + 1]] for i in range(k)]
    order = list(range(k))
    while order == sorted(order):
        rng.shuffle(order)
    entries = [(n.pitch, n.duration, None) for j in order for n in segments[j]]
    if derived_id is None:
        derived_id = f"{orig.id}-transposition-s{seed}"
    derived = sequence_from_entries(derived_id, entries, orig.timesig)
    params = {"seed": seed, "segments": k, "cuts": cuts, "order": order}
    return PlagiarismCase("transposition", orig.id, derived_id, None, params, derived)


def _splice(host: MelodySequence, fragment, pos: int, derived_id: str) -> MelodySequence:
    entries = [(n.pitch, n.duration, None) for n in host.notes[:pos]]
    entries += [(p, d, None) for p, d in fragment]
    entries += [(n.pitch, n.duration, None) for n in host.notes[pos:]]
    return sequence_from_entries(derived_id, entries, host.timesig)


def gen_pitch_shift(
    orig: MelodySequence, host: MelodySequence, seed: int, derived_id: str | None = None
) -> PlagiarismCase:
    """Shift a fragment of the original by a nonzero interval and splice it into the host."""
    if len(orig) < 8:
        raise TooShortError(f"{orig.id!r} has {len(orig)} notes, need at least 8")
    if orig.id == host.id:
        raise InvalidParamsError("original and host must be different pieces")
    rng = random.Random(seed)
    start, length = _fragment_span(rng, len(orig))
    fragment = orig.notes[start : start + length]
    valid = [
        s
        for s in range(-11, 12)
        if s != 0 and all(0 <= n.pitch + s <= 127 for n in fragment)
    ]
    if not valid:
        raise NoValidShiftError(f"no in-range shift exists for {orig.id!r}")
    shift = rng.choice(valid)
    pos = rng.randint(0, len(host))
    if derived_id is None:
        derived_id = f"{orig.id}-pitch_shift-s{seed}"
    derived = _splice(
        host, [(n.pitch + shift, n.duration) for n in fragment], pos, derived_id
    )
    params = {
        "seed": seed,
        "fragment_span": [start, start + length - 1],
        "shift": shift,
        "insert_at": pos,
        "derived_span": [pos, pos + length - 1],
        "host": host.id,
    }
    return PlagiarismCase("pitch_shift", orig.id, derived_id, host.id, params, derived)


def gen_duration_variance(
    orig: MelodySequence, host: MelodySequence, seed: int, derived_id: str | None = None
) -> PlagiarismCase:
    """Scale every duration of a fragment by one factor and splice it into the host."""
    if len(orig) < 8:
        raise TooShortError(f"{orig.id!r} has {len(orig)} notes, need at least 8")
    if orig.id == host.id:
        raise InvalidParamsError("original and host must be different pieces")
    rng = random.Random(seed)
    start, length = _fragment_span(rng, len(orig))
    fragment = orig.notes[start : start + length]
    factor = rng.choice(DURATION_FACTORS)
    pos = rng.randint(0, len(host))
    if derived_id is None:
        derived_id = f"{orig.id}-duration_variance-s{seed}"
    derived = _splice(
        host, [(n.pitch, n.duration * factor) for n in fragment], pos, derived_id
    )
    params = {
        "seed": seed,
        "fragment_span": [start, start + length - 1],
        "factor": float(factor),
        "insert_at": pos,
        "derived_span": [pos, pos + length - 1],
        "host": host.id,
    }
    return PlagiarismCase(
        "duration_variance", orig.id, derived_id, host.id, params, derived
    )


_MIN_NOTES = {"transposition": 5, "pitch_shift": 8, "duration_variance": 8}


def gen_dataset(
    corpus_dir: str | Path,
    counts: dict[str, int],
    seed: int,
    out_dir: str | Path | None = None,
) -> tuple[DatasetManifest, Path]:
    """Draw cases from a corpus directory and write derived pieces + manifest.

    Returns the manifest and the path it was written to. Derived pieces land
    in out_dir (default: a sibling directory named <corpus>-cases).
    """
    corpus_dir = Path(corpus_dir)
    for case_type in counts:
        if case_type not in CASE_TYPES:
            raise UnsupportedTypeError(f"cannot generate {case_type!r} cases")
    counts = {t: int(counts.get(t, 0)) for t in CASE_TYPES}
    if any(c < 0 for c in counts.values()):
        raise InvalidParamsError("case counts must be non-negative")

    paths = piece_files(corpus_dir)
    if not paths:
        raise InsufficientCorpusError(f"no piece files in {corpus_dir}")
    pieces = [load_piece(p) for p in paths]
    ids = [p.id for p in pieces]
    if len(set(ids)) != len(ids):
        raise InvalidParamsError(f"duplicate piece ids in {corpus_dir}")
    path_of = dict(zip(ids, paths))

    rng = random.Random(seed)
    splice_cases = counts["pitch_shift"] + counts["duration_variance"]
    shuffled = list(range(len(pieces)))
    rng.shuffle(shuffled)
    n_hosts = max(1, round(len(pieces) * _HOST_FRACTION)) if splice_cases else 0
    if len(pieces) - n_hosts < 1:
        raise InsufficientCorpusError(
            f"{len(pieces)} pieces cannot be split into originals and hosts"
        )
    hosts = sorted((pieces[i] for i in shuffled[:n_hosts]), key=lambda p: p.id)
    originals = sorted((pieces[i] for i in shuffled[n_hosts:]), key=lambda p: p.id)

    if out_dir is None:
        out_dir = corpus_dir.with_name(f"{corpus_dir.name}-cases")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    records = []
    index = 0
    for case_type in CASE_TYPES:
        eligible = [p for p in originals if len(p) >= _MIN_NOTES[case_type]]
        for _ in range(counts[case_type]):
            if not eligible:
                raise InsufficientCorpusError(
                    f"no original is long enough for {case_type} cases"
                )
            case_seed = rng.randrange(2**32)
            orig = rng.choice(eligible)
            derived_id = f"case{index:04d}-{case_type}"
            if case_type == "transposition":
                case = gen_transposition(orig, case_seed, derived_id)
            else:
                host = rng.choice(hosts)
                gen = gen_pitch_shift if case_type == "pitch_shift" else gen_duration_variance
                case = gen(orig, host, case_seed, derived_id)
            derived_path = out_dir / f"{derived_id}.json"
            derived_path.write_text(serialize_notelist(case.derived))
            record = {
                "type": case.type,
                "original": os.path.relpath(path_of[case.original_id], out_dir),
                "derived": derived_path.name,
                "params": case.params,
            }
            if case.host_id is not None:
                record["host"] = os.path.relpath(path_of[case.host_id], out_dir)
            records.append(record)
            index += 1

    manifest = DatasetManifest(
        seed,
        tuple(os.path.relpath(path_of[p.id], out_dir) for p in originals),
        tuple(records),
    )
    manifest_path = out_dir / "manifest.json"
    manifest.save(manifest_path)
    return manifest, manifest_path


_DURATIONS = (
    Fraction(1, 4),
    Fraction(1, 2),
    Fraction(3, 4),
    Fraction(1),
    Fraction(3, 2),
    Fraction(2),
)

_MOTIF_STEPS = (-4, -3, -2, -1, 1, 2, 3, 4, -2, -1, 1, 2)  # stepwise motion dominates

_PITCH_LOW, _PITCH_HIGH = 43, 91


def motif_library(seed: int, count: int = 14) -> tuple[tuple[int, ...], ...]:
    """Short interval figures shared across a corpus.

    Sharing a melodic vocabulary makes distinct pieces genuinely confusable
    at the n-gram level, the regime plagiarism ranking has to cope with.
    """
    rng = random.Random(seed)
    return tuple(
        tuple(rng.choice(_MOTIF_STEPS) for _ in range(rng.randint(3, 6)))
        for _ in range(count)
    )


def random_melody(
    piece_id: str,
    seed: int,
    min_notes: int = 36,
    max_notes: int = 72,
    motifs: tuple[tuple[int, ...], ...] | None = None,
) -> MelodySequence:
    """Synthesize one melody by stringing interval motifs together.

    The piece picks motifs with its own preference weights, glues them with
    occasional connector steps, and realizes rhythm from its own duration
    preferences; the pitch walk reflects at the playable range edges.
    """
    rng = random.Random(seed)
    if motifs is None:
        motifs = motif_library(rng.randrange(2**32))
    n = rng.randint(min_notes, max_notes)
    motif_weights = [rng.random() for _ in motifs]
    duration_weights = [rng.uniform(0.05, 1.0) for _ in _DURATIONS]
    beats_per_measure = Fraction(rng.choice((3, 4, 4)))

    def next_duration() -> Fraction:
        return rng.choices(_DURATIONS, duration_weights)[0]

    pitch = rng.randint(55, 79)
    entries = [(pitch, next_duration(), None)]
    while len(entries) < n:
        for step in rng.choices(motifs, motif_weights)[0]:
            if not _PITCH_LOW <= pitch + step <= _PITCH_HIGH:
                step = -step
            pitch += step
            entries.append((pitch, next_duration(), None))
        if rng.random() < 0.3:
            step = rng.choice((-2, -1, 1, 2))
            if not _PITCH_LOW <= pitch + step <= _PITCH_HIGH:
                step = -step
            pitch += step
            entries.append((pitch, next_duration(), None))
    return sequence_from_entries(
        piece_id, entries[:n], ((Fraction(0), beats_per_measure),)
    )


def synth_corpus(
    directory: str | Path,
    count: int,
    seed: int,
    min_notes: int = 36,
    max_notes: int = 72,
) -> list[Path]:
    """Write `count` synthetic pieces sharing one motif library; returns their paths."""
    if count < 1:
        raise InvalidParamsError(f"corpus size {count} < 1")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)
    motifs = motif_library(rng.randrange(2**32))
    paths = []
    for i in range(count):
        piece = random_melody(
            f"piece{i:03d}", rng.randrange(2**32), min_notes, max_notes, motifs
        )
        path = directory / f"{piece.id}.json"
        path.write_text(serialize_notelist(piece))
        paths.append(path)
    return paths
