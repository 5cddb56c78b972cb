"""End-to-end overlap detection: candidate search, geometric verification,
and shared-substring recovery.

A matched q-gram position pair (u, v) is an edge with shift u - v. A true
overlap concentrates edges around one shift (the reference offset o) and one
region of positions (around the reference position pos). Verification keeps
the densest shift window, then the densest position window, and accepts the
pair when at least C edges survive. Accepted pairs get their shared
substrings recovered from the complete (unsubsampled) signature sets.
"""

from __future__ import annotations

import logging
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .core import Params, ReadSet, Signature, derive_randomness
from .editdist import edit_distance_leq
from .index import (
    BucketTable,
    MatchList,
    build_signatures,
    frequency_filter,
    search_similar_qgrams,
    subsample_signatures,
)

log = logging.getLogger(__name__)


class VerifyResult(NamedTuple):
    o: int    # reference offset: the dominant shift u - v
    pos: int  # reference position in x_i


@dataclass(frozen=True)
class Overlap:
    """A verified overlapping read pair with shared-substring coordinates.

    Spans are 1-based start positions of the first and last matched q-gram
    in each read (j < i always). n_matches counts the complete-set matches
    supporting the span.
    """

    i: int
    j: int
    p_i_s: int
    p_i_e: int
    p_j_s: int
    p_j_e: int
    n_matches: int = 0


@dataclass
class PipelineStats:
    """Diagnostic counters for one find_overlaps run."""

    n_signatures: int = 0
    n_after_filter: int = 0
    n_searched: int = 0
    n_candidate_pairs: int = 0
    n_verified: int = 0
    n_rejected_verify: int = 0
    n_dropped_empty_box: int = 0


def max_stab(intervals: list[tuple[float, float]]) -> float:
    """Leftmost point stabbing the maximum number of closed intervals [a, b].

    The depth function only increases at left endpoints, so the leftmost
    maximizer is one of them; an endpoint sweep finds it deterministically.
    """
    if not intervals:
        raise ValueError("interval list must be non-empty")
    starts = sorted(a for a, _ in intervals)
    ends = sorted(b for _, b in intervals)
    best_point = starts[0]
    best_depth = 0
    for a in starts:
        depth = bisect_right(starts, a) - bisect_left(ends, a)
        if depth > best_depth:
            best_depth = depth
            best_point = a
    return best_point


def _densest_window(values: list[int], half_width: float) -> tuple[int, list[int]]:
    """Pick the observed value whose window [v - half_width, v + half_width]
    covers the most values (leftmost on ties), and the indices it covers.

    Centering on an observed value keeps the returned reference physically
    meaningful (it is an actual shift or position) and guarantees the
    survivors all lie within half_width of it.
    """
    ordered = sorted(values)
    best_center = ordered[0]
    best_cover = -1
    for v in sorted(set(values)):
        cover = bisect_right(ordered, v + half_width) - bisect_left(ordered, v - half_width)
        if cover > best_cover:
            best_cover = cover
            best_center = v
    kept = [idx for idx, v in enumerate(values) if abs(v - best_center) <= half_width]
    return best_center, kept


def verify(x_i: str, x_j: str, matches: list[tuple[int, int]], params: Params) -> Optional[VerifyResult]:
    """Two-stage geometric check of a candidate pair's match list.

    Stage 1 keeps matches whose shift u - v lies within (epsilon/2)*L of the
    dominant shift o; stage 2 keeps matches whose position u lies within L/2
    of the dominant position pos. Returns (o, pos) iff at least C matches
    survive both stages, else None.
    """
    if not matches:
        raise ValueError("match list must be non-empty")
    shift_halfwidth = params.epsilon / 2 * params.L
    o, kept = _densest_window([u - v for u, v in matches], shift_halfwidth)
    stage1 = [matches[idx] for idx in kept]

    pos, kept = _densest_window([u for u, _ in stage1], params.L / 2)
    stage2 = [stage1[idx] for idx in kept]

    if len(stage2) < params.C:
        return None
    return VerifyResult(o=o, pos=pos)


def _group_by_smooth(sigs: list[Signature]) -> dict[str, list[Signature]]:
    groups: dict[str, list[Signature]] = {}
    for sig in sigs:
        groups.setdefault(sig.t, []).append(sig)
    return groups


def find_shared_substrings(
    x_i: str,
    x_j: str,
    o: int,
    pos: int,
    delta_i: list[Signature],
    delta_j: list[Signature],
    params: Params,
    group_j: Optional[dict[str, list[Signature]]] = None,
) -> Optional[Overlap]:
    """Recover the shared-substring spans of a verified pair.

    Rebuilds the complete match set from the unsubsampled signature sets
    (identical smooth q-gram and edit distance <= K), seeds the span from
    the dense box around (pos, o), then extends greedily outward: a match
    at distance g (0 < g < L) past the current end is accepted when its
    shift deviates from the end's shift by less than epsilon * g, and
    symmetrically on the left. Returns None when the dense box is empty,
    which can happen because verification ran on the subsampled sets.
    """
    if not delta_i or not delta_j:
        return None
    if group_j is None:
        group_j = _group_by_smooth(delta_j)

    q, k_max = params.q, params.K
    matches: list[tuple[int, int]] = []
    for sig in delta_i:
        bucket = group_j.get(sig.t)
        if bucket is None:
            continue
        s = x_i[sig.p - 1 : sig.p - 1 + q]
        for other in bucket:
            s2 = x_j[other.p - 1 : other.p - 1 + q]
            if edit_distance_leq(s, s2, k_max).within:
                matches.append((sig.p, other.p))

    half_l = params.L / 2
    half_shift = params.epsilon / 2 * params.L
    box = [
        (p, pp)
        for p, pp in matches
        if abs(p - pos) <= half_l and abs((p - pp) - o) <= half_shift
    ]
    if not box:
        return None

    p_i_s, p_j_s = min(box)
    p_i_e, p_j_e = max(box)
    n_support = len(box)

    # all matches inside the position window are consumed by the seed box
    outside = [(p, pp) for p, pp in matches if abs(p - pos) > half_l]
    outside.sort(key=lambda m: (max(m[0] - p_i_e, p_i_s - m[0]), m[0], m[1]))

    eps, l_max = params.epsilon, params.L
    for p, pp in outside:
        gap_right = p - p_i_e
        if 0 < gap_right < l_max and abs((p - pp) - (p_i_e - p_j_e)) < eps * gap_right:
            p_i_e, p_j_e = p, max(pp, p_j_e)
            n_support += 1
            continue
        gap_left = p_i_s - p
        if 0 < gap_left < l_max and abs((p - pp) - (p_i_s - p_j_s)) < eps * gap_left:
            p_i_s, p_j_s = p, min(pp, p_j_s)
            n_support += 1

    return Overlap(
        i=delta_i[0].i,
        j=delta_j[0].i,
        p_i_s=p_i_s,
        p_i_e=p_i_e,
        p_j_s=p_j_s,
        p_j_e=p_j_e,
        n_matches=n_support,
    )


def build_match_lists(
    reads: ReadSet,
    params: Params,
    stats: Optional[PipelineStats] = None,
) -> tuple[MatchList, list[list[Signature]]]:
    """Signature generation, filtering, subsampling and incremental search.

    Returns the per-pair match lists M_ij (j < i, canonical (u, v) order)
    together with the filtered complete signature sets, which the
    shared-substring recovery needs afterwards.
    """
    rnd = derive_randomness(params.seed, 1, 1, params)
    sets = [build_signatures(x, i, rnd, params) for i, x in enumerate(reads.seqs)]
    if stats is not None:
        stats.n_signatures = sum(len(s) for s in sets)
    sets = frequency_filter(sets, params.eta)
    if stats is not None:
        stats.n_after_filter = sum(len(s) for s in sets)

    table: BucketTable = {}
    pair_matches: dict[tuple[int, int], set[tuple[int, int]]] = {}
    for i, x in enumerate(reads.seqs):
        sampled = subsample_signatures(sets[i], len(x), params.alpha)
        if stats is not None:
            stats.n_searched += len(sampled)
        for sig in sampled:
            for i2, u, v in search_similar_qgrams(sig, table, reads, params.K, params.q):
                if i2 < i:
                    pair_matches.setdefault((i, i2), set()).add((u, v))

    match_lists: MatchList = {pair: sorted(ms) for pair, ms in sorted(pair_matches.items())}
    return match_lists, sets


def find_overlaps(
    reads: ReadSet,
    params: Params,
    stats: Optional[PipelineStats] = None,
) -> list[Overlap]:
    """Detect overlapping read pairs; output is sorted by (i, j), one entry
    per pair, with j < i."""
    match_lists, sets = build_match_lists(reads, params, stats)
    group_cache: dict[int, dict[str, list[Signature]]] = {}
    overlaps: list[Overlap] = []
    for (i, j), matches in match_lists.items():
        if len(matches) < params.C:
            continue
        if stats is not None:
            stats.n_candidate_pairs += 1
        result = verify(reads.seqs[i], reads.seqs[j], matches, params)
        if result is None:
            if stats is not None:
                stats.n_rejected_verify += 1
            continue
        if j not in group_cache:
            group_cache[j] = _group_by_smooth(sets[j])
        overlap = find_shared_substrings(
            reads.seqs[i],
            reads.seqs[j],
            result.o,
            result.pos,
            sets[i],
            sets[j],
            params,
            group_j=group_cache[j],
        )
        if overlap is None:
            if stats is not None:
                stats.n_dropped_empty_box += 1
            log.debug("pair (%d, %d) verified but its dense box is empty", i, j)
            continue
        if stats is not None:
            stats.n_verified += 1
        overlaps.append(overlap)
    return sorted(overlaps, key=lambda ov: (ov.i, ov.j))


def collapse_strand_twins(overlaps: list[Overlap], reads: ReadSet, n_original: int,
                          q: int) -> list[tuple[Overlap, str]]:
    """Map overlaps found on a twin-extended read set back to original reads.

    Twin t of read r sits at index r + n_original and holds the reverse
    complement. Overlaps between the two strands of one read are dropped;
    spans on '-' entries are mapped back to forward q-gram start
    coordinates. Each unordered pair is kept once, first occurrence wins.
    """
    seen: set[tuple[int, int]] = set()
    out: list[tuple[Overlap, str]] = []
    for ov in overlaps:
        bi, bj = ov.i % n_original, ov.j % n_original
        if bi == bj:
            continue
        key = (min(bi, bj), max(bi, bj))
        if key in seen:
            continue
        seen.add(key)
        strand = "+" if (ov.i < n_original) == (ov.j < n_original) else "-"
        pis, pie = _map_span(ov.i, ov.p_i_s, ov.p_i_e, reads, n_original, q)
        pjs, pje = _map_span(ov.j, ov.p_j_s, ov.p_j_e, reads, n_original, q)
        out.append((Overlap(bi, bj, pis, pie, pjs, pje, ov.n_matches), strand))
    return out


def _map_span(idx: int, span_s: int, span_e: int, reads: ReadSet, n_original: int,
              q: int) -> tuple[int, int]:
    if idx < n_original:
        return span_s, span_e
    length = len(reads.seqs[idx])
    return length - span_e - q + 2, length - span_s - q + 2
