"""Signature construction, filtering, subsampling and the bucket index.

The bucket table maps each smooth q-gram string to the signatures carrying
it, so bucket collisions are exactly smooth-q-gram equality. The table is
built incrementally while searching: a signature only sees signatures
inserted before it, which yields each read pair once (j < i).
"""

from __future__ import annotations

from collections import Counter
from typing import Optional

import numpy as np

from .core import (
    Params,
    Randomness,
    ReadSet,
    Signature,
    _CODE2CHAR,
    derive_randomness,
    encode_dna,
    pack_words,
)
from .editdist import edit_distance_leq
from .embedding import smooth_batch

# bucket table: smooth q-gram -> signatures inserted so far
BucketTable = dict[str, list[Signature]]
# per ordered read pair (i, j), j < i: matched q-gram position pairs (u, v)
MatchList = dict[tuple[int, int], list[tuple[int, int]]]


def build_signatures(x: str, i: int, rnd: Randomness, params: Params) -> list[Signature]:
    """Signatures for every q-gram of read x_i, in increasing position.

    Reads shorter than q produce an empty list.
    """
    q = params.q
    n_pos = len(x) - q + 1
    if n_pos <= 0:
        return []
    codes = encode_dna(x)
    windows = np.lib.stride_tricks.sliding_window_view(codes, q)
    smooth = smooth_batch(windows, rnd)
    ranks = rnd.rank_words(pack_words(smooth))
    chars = _CODE2CHAR[smooth]
    return [
        Signature(chars[idx].tobytes().decode("ascii"), float(ranks[idx]), i, idx + 1)
        for idx in range(n_pos)
    ]


def frequency_filter(all_sets: list[list[Signature]], eta: float) -> list[list[Signature]]:
    """Drop signatures whose smooth q-gram accounts for >= eta of all signatures.

    Counts are global over all reads. eta == 1 disables the filter entirely
    (otherwise a degenerate input whose signatures all share one smooth
    q-gram would lose everything).
    """
    if not 0 < eta <= 1:
        raise ValueError("eta must be in (0, 1]")
    if eta >= 1:
        return all_sets
    counts = Counter()
    for sigs in all_sets:
        counts.update(sig.t for sig in sigs)
    threshold = eta * sum(counts.values())
    return [[sig for sig in sigs if counts[sig.t] < threshold] for sigs in all_sets]


def subsample_signatures(delta_i: list[Signature], x_len: int, alpha: float) -> list[Signature]:
    """Keep the floor(alpha * x_len) signatures of smallest hash rank.

    Ties in rank break by (read index, position). The survivors keep their
    original position order. If fewer signatures remain after filtering,
    all are kept.
    """
    if not 0 < alpha <= 1:
        raise ValueError("alpha must be in (0, 1]")
    keep = int(alpha * x_len)
    if keep >= len(delta_i):
        return list(delta_i)
    order = sorted(range(len(delta_i)), key=lambda n: (delta_i[n].r, delta_i[n].i, delta_i[n].p))
    chosen = sorted(order[:keep])
    return [delta_i[n] for n in chosen]


def search_similar_qgrams(
    delta: Signature,
    table: BucketTable,
    reads: ReadSet,
    k_max: int,
    q: int,
) -> list[tuple[int, int, int]]:
    """Return (i', p, p') for every stored signature in delta's bucket whose
    q-gram is within edit distance k_max of delta's q-gram, then insert
    delta into the bucket.
    """
    seq = reads.seqs[delta.i]
    s = seq[delta.p - 1 : delta.p - 1 + q]
    found = []
    bucket = table.get(delta.t)
    if bucket is not None:
        for other in bucket:
            s2 = reads.seqs[other.i][other.p - 1 : other.p - 1 + q]
            if edit_distance_leq(s, s2, k_max).within:
                found.append((other.i, delta.p, other.p))
        bucket.append(delta)
    else:
        table[delta.t] = [delta]
    return found


def find_similar_qgram_pairs(
    qgrams: list[str],
    params: Params,
    d: Optional[int] = None,
    z: Optional[int] = None,
) -> list[tuple[int, int]]:
    """All index pairs (i, j), i < j, whose q-grams are within edit distance K.

    Runs d * z independent (embedding, subsampling) rounds; candidates are
    pairs whose smooth q-grams collide in some round, deduplicated, then
    confirmed with the thresholded edit distance, so every returned pair
    genuinely satisfies the threshold. Recall grows with d and z; output
    under (d, z) is a subset of the output under (d+1, z) or (d, z+1) for
    the same seed.

    The frequency filter is applied per round: a q-gram whose smooth q-gram
    occurs at least eta * n times in that round neither searches nor enters
    the round's table (eta == 1 disables this).
    """
    d = params.d if d is None else d
    z = params.z if z is None else z
    if d < 1 or z < 1:
        raise ValueError("d and z must be >= 1")
    n = len(qgrams)
    if n == 0:
        return []
    q = params.q
    for idx, g in enumerate(qgrams):
        if len(g) != q:
            raise ValueError(f"q-gram {idx} has length {len(g)}, expected {q}")
    codes = np.array([encode_dna(g) for g in qgrams], dtype=np.uint8)
    round_params = Params(
        q=params.q, m=params.m, kappa=params.kappa, alpha=params.alpha,
        eta=params.eta, K=params.K, C=params.C, L=params.L,
        epsilon=params.epsilon, d=d, z=z, seed=params.seed,
    )

    candidates: set[tuple[int, int]] = set()
    for j in range(1, d + 1):
        for k in range(1, z + 1):
            rnd = derive_randomness(params.seed, j, k, round_params)
            words = pack_words(smooth_batch(codes, rnd))
            keys = [w.tobytes() for w in words]
            filtering = round_params.eta < 1
            if filtering:
                freq = Counter(keys)
                threshold = round_params.eta * n
            table: dict[bytes, list[int]] = {}
            for idx, key in enumerate(keys):
                if filtering and freq[key] >= threshold:
                    continue
                bucket = table.get(key)
                if bucket is not None:
                    for other in bucket:
                        candidates.add((other, idx))
                    bucket.append(idx)
                else:
                    table[key] = [idx]

    out = []
    for a, b in sorted(candidates):
        if edit_distance_leq(qgrams[a], qgrams[b], round_params.K).within:
            out.append((a, b))
    return out
