"""Exception types raised across the package."""


class MelplagError(Exception):
    """Base class for every error this package raises on purpose."""


# --- ingestion ---

class MalformedFileError(MelplagError):
    """MIDI bytes violate the SMF chunk layout."""


class UnsupportedDivisionError(MelplagError):
    """MIDI file uses SMPTE timing instead of ticks-per-quarter."""


class EmptyMelodyError(MelplagError):
    """No melody notes survive extraction."""


class NotelistSyntaxError(MelplagError):
    """Note-list document is malformed."""


class RangeError(MelplagError):
    """A field value falls outside its allowed range."""


# --- encoding / alignment ---

class TooShortError(MelplagError):
    """Sequence has too few notes for the requested operation."""


class InvalidParamsError(MelplagError):
    pass


class EmptyClipError(MelplagError):
    pass


# --- matching ---

class EmptyInputError(MelplagError):
    pass


class EmptyMatchingError(MelplagError):
    pass


# --- n-gram baselines ---

class InvalidOrderError(MelplagError):
    pass


class BothEmptyError(MelplagError):
    """Both n-gram profiles are empty; similarity is undefined."""


class AllZeroWeightsError(MelplagError):
    """Tversky denominator is zero (no positively weighted n-grams)."""


# --- dataset generation ---

class NoValidShiftError(MelplagError):
    """No pitch shift keeps the fragment inside the MIDI range."""


class InsufficientCorpusError(MelplagError):
    pass


class UnsupportedTypeError(MelplagError):
    """Requested case type is not generated by this tool."""


# --- evaluation ---

class EmptyListError(MelplagError):
    pass


class UnknownDetectorError(MelplagError):
    pass


class MissingFileError(MelplagError):
    pass
