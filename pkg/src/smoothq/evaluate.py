"""Accuracy harness: pair-level precision/recall/F1 against simulator truth,
and the brute-force matched-q-gram histogram."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

from .core import ReadSet, encode_dna
from .editdist import edit_distance_batch
from .pipeline import Overlap
from .simulate import GroundTruth

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class EvalConfig:
    """Evaluation thresholds.

    gamma is the minimum overlap length for a pair to count, on both sides
    of the comparison: truth pairs must truly overlap by >= gamma, and
    reported pairs must claim a shared substring of >= gamma characters in
    both reads (shorter reports are ignored, the way a mapping-based
    evaluator ignores overlaps below its length threshold). q converts
    reported q-gram start spans into substring lengths. theta, the problem
    statement's edit-distance threshold, is recorded for reference but takes
    no part in pair classification: detector acceptance is governed by the
    match-count and geometry thresholds instead.
    """

    gamma: int = 500
    q: int = 14
    theta: Optional[float] = None

    def __post_init__(self):
        if self.gamma < 1:
            raise ValueError("gamma must be >= 1")
        if self.q < 1:
            raise ValueError("q must be >= 1")


@dataclass(frozen=True)
class EvalReport:
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int
    n_reported: int
    n_truth_pairs: int

    def text(self) -> str:
        return (
            f"reported pairs:   {self.n_reported}\n"
            f"truth pairs:      {self.n_truth_pairs}\n"
            f"true positives:   {self.tp}\n"
            f"false positives:  {self.fp}\n"
            f"false negatives:  {self.fn}\n"
            f"precision:        {self.precision:.4f}\n"
            f"recall:           {self.recall:.4f}\n"
            f"F1:               {self.f1:.4f}"
        )

    def summary_line(self) -> str:
        return (
            f"precision={self.precision:.6f} recall={self.recall:.6f} f1={self.f1:.6f} "
            f"tp={self.tp} fp={self.fp} fn={self.fn} "
            f"reported={self.n_reported} truth={self.n_truth_pairs}"
        )


ReportedPair = Union[Overlap, tuple[str, str], tuple[str, str, int]]


def evaluate(reported: Iterable[ReportedPair], truth: GroundTruth, cfg: EvalConfig) -> EvalReport:
    """Score reported pairs against truth: a pair is a true positive iff it
    truly overlaps by at least gamma.

    Items are Overlap values (indices into the truth's read order, reported
    length taken as the smaller claimed substring), (name, name, length)
    triples, or bare (name, name) tuples which skip the reported-length
    threshold. Unknown names are an error. Precision over an empty report is
    defined as 0, recall over empty truth as 1 (both logged).
    """
    index = {}
    for idx, name in enumerate(truth.names):
        if name in index:
            raise ValueError(f"duplicate read name {name!r}; evaluation needs unique names")
        index[name] = idx

    pairs: set[tuple[int, int]] = set()
    for item in reported:
        if isinstance(item, Overlap):
            a, b = item.i, item.j
            if not (0 <= a < len(truth.names) and 0 <= b < len(truth.names)):
                raise ValueError(f"overlap indices ({a}, {b}) outside the truth read set")
            # spans are q-gram start positions; the claimed substring runs
            # q-1 characters past the last start
            length = min(item.p_i_e - item.p_i_s, item.p_j_e - item.p_j_s) + cfg.q
        else:
            name_a, name_b = item[0], item[1]
            length = item[2] if len(item) > 2 else None
            try:
                a, b = index[name_a], index[name_b]
            except KeyError as exc:
                raise ValueError(f"unknown read name {exc.args[0]!r}") from exc
        if a == b:
            raise ValueError(f"self-pair reported for read index {a}")
        if length is not None and length < cfg.gamma:
            continue
        pairs.add((min(a, b), max(a, b)))

    truth_pairs = truth.pairs_with_min_overlap(cfg.gamma)
    tp = len(pairs & truth_pairs)
    fp = len(pairs) - tp
    fn = len(truth_pairs) - tp
    if pairs:
        precision = tp / len(pairs)
    else:
        precision = 0.0
        log.warning("no pairs reported; precision defined as 0")
    if truth_pairs:
        recall = tp / len(truth_pairs)
    else:
        recall = 1.0
        log.warning("no truth pairs at gamma=%d; recall vacuously 1", cfg.gamma)
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return EvalReport(
        precision=precision, recall=recall, f1=f1, tp=tp, fp=fp, fn=fn,
        n_reported=len(pairs), n_truth_pairs=len(truth_pairs),
    )


@dataclass(frozen=True)
class QgramMatchStats:
    """Exact-count histogram of q-gram pairs by edit distance."""

    n_pairs: int
    counts: np.ndarray  # counts[e] = q-gram pairs at edit distance exactly e

    @property
    def averages(self) -> np.ndarray:
        if self.n_pairs == 0:
            return np.zeros_like(self.counts, dtype=np.float64)
        return self.counts / self.n_pairs

    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.counts)


def count_matched_qgrams(
    reads: ReadSet,
    q: int,
    max_ed: int,
    pairs: Optional[list[tuple[int, int]]] = None,
    max_pairs: int = 200,
    chunk: int = 1 << 18,
) -> QgramMatchStats:
    """Brute-force count, over the given read pairs, of q-gram position pairs
    at each edit distance 0..max_ed.

    Every q-gram of one read is compared against every q-gram of the other
    (banded, batched), so cost is quadratic per pair; the pair budget guards
    against accidental large inputs.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    if max_ed < 0:
        raise ValueError("max_ed must be >= 0")
    if pairs is None:
        n = len(reads)
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if len(pairs) > max_pairs:
        raise ValueError(
            f"{len(pairs)} read pairs exceed the budget of {max_pairs}; "
            "raise max_pairs explicitly for large jobs"
        )

    window_cache: dict[int, np.ndarray] = {}

    def windows(idx: int) -> np.ndarray:
        if idx not in window_cache:
            codes = encode_dna(reads.seqs[idx])
            if codes.size < q:
                window_cache[idx] = np.empty((0, q), dtype=np.uint8)
            else:
                window_cache[idx] = np.lib.stride_tricks.sliding_window_view(codes, q)
        return window_cache[idx]

    counts = np.zeros(max_ed + 1, dtype=np.int64)
    for a, b in pairs:
        wa, wb = windows(a), windows(b)
        na, nb = wa.shape[0], wb.shape[0]
        total = na * nb
        for lo in range(0, total, chunk):
            sel = np.arange(lo, min(lo + chunk, total))
            dist = edit_distance_batch(wa[sel // nb], wb[sel % nb], max_ed)
            inside = dist[dist <= max_ed]
            counts += np.bincount(inside, minlength=max_ed + 1)

    return QgramMatchStats(n_pairs=len(pairs), counts=counts)
