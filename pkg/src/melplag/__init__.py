"""Fine-grained melodic plagiarism detection for symbolic music.

Melodies are encoded relatively (pitch deltas, log2 duration ratios), cut
into overlapping clips, scored pairwise with a music-aware weighted edit
distance, and matched optimally across pieces; the matched edge weights
yield a plagiarism degree and per-span report. N-gram baselines, a
simulated-plagiarism dataset generator, and a ranking evaluation harness
round out the toolkit.
"""

__version__ = "0.1.0"

from .align import CostParams, edge_weight, edit_distance, substitution_cost
from .baselines import (
    CorpusStats,
    NGramProfile,
    build_stats,
    idf,
    load_stats,
    profile,
    save_stats,
    stats_path,
    sum_common,
    tfidf_correlation,
    tversky_equal,
    ukkonen,
)
from .config import Config, load_config
from .core import (
    MelodySequence,
    Note,
    PieceFormat,
    PieceManifest,
    beats,
    derive_downbeats,
    load_piece,
    parse_notelist,
    piece_files,
    scale_durations,
    sequence_from_entries,
    serialize_notelist,
    transpose,
)
from .datagen import (
    CASE_TYPES,
    DatasetManifest,
    PlagiarismCase,
    gen_dataset,
    gen_duration_variance,
    gen_pitch_shift,
    gen_transposition,
    motif_library,
    random_melody,
    synth_corpus,
)
from .encode import Clip, Element, EncodedSequence, encode_relative, segment
from .errors import MelplagError
from .evalharness import (
    DETECTORS,
    RankingResult,
    accuracy,
    ari,
    evaluate,
    format_table,
    rank_query,
)
from .match import (
    MatchedPair,
    MatchReport,
    SimilarityGraph,
    build_graph,
    compare_pieces,
    match_pieces,
    plagiarism_degree,
    solve_assignment,
)
from .midi import parse_midi

__all__ = [
    "__version__",
    "CASE_TYPES",
    "DETECTORS",
    "Clip",
    "Config",
    "CorpusStats",
    "CostParams",
    "DatasetManifest",
    "Element",
    "EncodedSequence",
    "MatchReport",
    "MatchedPair",
    "MelodySequence",
    "MelplagError",
    "NGramProfile",
    "Note",
    "PieceFormat",
    "PieceManifest",
    "PlagiarismCase",
    "RankingResult",
    "SimilarityGraph",
    "accuracy",
    "ari",
    "beats",
    "build_graph",
    "build_stats",
    "compare_pieces",
    "derive_downbeats",
    "edge_weight",
    "edit_distance",
    "encode_relative",
    "evaluate",
    "format_table",
    "gen_dataset",
    "gen_duration_variance",
    "gen_pitch_shift",
    "gen_transposition",
    "idf",
    "load_config",
    "load_piece",
    "load_stats",
    "match_pieces",
    "motif_library",
    "parse_midi",
    "parse_notelist",
    "piece_files",
    "plagiarism_degree",
    "profile",
    "random_melody",
    "rank_query",
    "save_stats",
    "scale_durations",
    "segment",
    "sequence_from_entries",
    "serialize_notelist",
    "solve_assignment",
    "stats_path",
    "substitution_cost",
    "sum_common",
    "synth_corpus",
    "tfidf_correlation",
    "transpose",
    "tversky_equal",
    "ukkonen",
]
