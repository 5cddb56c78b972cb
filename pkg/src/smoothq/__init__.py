"""Smooth q-gram matching and overlap detection for long, error-prone reads."""

from .core import (
    Params,
    Randomness,
    ReadSet,
    Signature,
    derive_randomness,
    reverse_complement,
)
from .editdist import EditResult, edit_distance_full, edit_distance_leq
from .embedding import cgk_embed, generate_smooth_qgram, match_probability
from .evaluate import EvalConfig, EvalReport, QgramMatchStats, count_matched_qgrams, evaluate
from .index import (
    build_signatures,
    find_similar_qgram_pairs,
    frequency_filter,
    search_similar_qgrams,
    subsample_signatures,
)
from .pipeline import (
    Overlap,
    PipelineStats,
    VerifyResult,
    find_overlaps,
    find_shared_substrings,
    max_stab,
    verify,
)
from .simulate import GroundTruth, simulate_reads

__version__ = "0.1.0"

__all__ = [
    "EditResult",
    "EvalConfig",
    "EvalReport",
    "GroundTruth",
    "Overlap",
    "Params",
    "PipelineStats",
    "QgramMatchStats",
    "Randomness",
    "ReadSet",
    "Signature",
    "VerifyResult",
    "build_signatures",
    "cgk_embed",
    "count_matched_qgrams",
    "derive_randomness",
    "edit_distance_full",
    "edit_distance_leq",
    "evaluate",
    "find_overlaps",
    "find_shared_substrings",
    "find_similar_qgram_pairs",
    "frequency_filter",
    "generate_smooth_qgram",
    "match_probability",
    "max_stab",
    "reverse_complement",
    "search_similar_qgrams",
    "simulate_reads",
    "subsample_signatures",
    "verify",
]
