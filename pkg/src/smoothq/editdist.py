"""Levenshtein distance primitives: thresholded, exact, and batched.

edit_distance_leq is the hot verification primitive (candidate bucket
collisions are confirmed with it), so it runs a diagonal band of width
2K+1 with an early exit once the band minimum exceeds K. edit_distance_full
is the unbanded oracle used by tests and by the read-simulator accuracy
checks; edit_distance_batch evaluates many fixed-length pairs at once for
the brute-force q-gram statistics.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

import numpy as np


class EditResult(NamedTuple):
    within: bool
    distance: Optional[int]  # defined only when within is true


def edit_distance_leq(s: str, t: str, k: int) -> EditResult:
    """Decide whether the edit distance of s and t is at most k.

    Unit-cost insertions, deletions and substitutions. When within, the
    reported distance is exact. Cost is O(k * min(|s|, |t|)).
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    la, lb = len(s), len(t)
    if abs(la - lb) > k:
        return EditResult(False, None)
    if s == t:
        return EditResult(True, 0)
    big = k + 1
    prev = [j if j <= k else big for j in range(lb + 1)]
    for i in range(1, la + 1):
        lo = max(1, i - k)
        hi = min(lb, i + k)
        curr = [big] * (lb + 1)
        if i <= k:
            curr[0] = i
            best = i
        else:
            best = big
        ca = s[i - 1]
        for j in range(lo, hi + 1):
            cost = prev[j - 1] + (ca != t[j - 1])
            up = prev[j] + 1
            if up < cost:
                cost = up
            left = curr[j - 1] + 1
            if left < cost:
                cost = left
            curr[j] = cost
            if cost < best:
                best = cost
        if best > k:
            return EditResult(False, None)
        prev = curr
    d = prev[lb]
    if d <= k:
        return EditResult(True, d)
    return EditResult(False, None)


def edit_distance_full(s: str, t: str) -> int:
    """Exact Levenshtein distance by full dynamic programming."""
    la, lb = len(s), len(t)
    if la == 0:
        return lb
    if lb == 0:
        return la
    if la * lb <= 4096:
        return _full_dp_small(s, t)
    return _full_dp_rows(s, t)


def _full_dp_small(s: str, t: str) -> int:
    lb = len(t)
    prev = list(range(lb + 1))
    for i, ca in enumerate(s, 1):
        curr = [i] + [0] * lb
        for j in range(1, lb + 1):
            curr[j] = min(
                prev[j] + 1,
                curr[j - 1] + 1,
                prev[j - 1] + (ca != t[j - 1]),
            )
        prev = curr
    return prev[lb]


def _full_dp_rows(s: str, t: str) -> int:
    # row-vectorized DP: the in-row insertion dependency collapses to a
    # running minimum of (candidate[j] - j) because insertions cost 1 each
    lb = len(t)
    t_codes = np.frombuffer(t.encode("ascii"), dtype=np.uint8)
    offsets = np.arange(lb + 1, dtype=np.int64)
    prev = offsets.copy()
    tmp = np.empty(lb + 1, dtype=np.int64)
    for i, ca in enumerate(s, 1):
        tmp[0] = i
        np.minimum(prev[1:] + 1, prev[:-1] + (t_codes != ord(ca)), out=tmp[1:])
        tmp -= offsets
        np.minimum.accumulate(tmp, out=tmp)
        tmp += offsets
        prev, tmp = tmp, prev
    return int(prev[lb])


def edit_distance_batch(a: np.ndarray, b: np.ndarray, k: int) -> np.ndarray:
    """Banded edit distances for n row pairs of code matrices a (n, la) and
    b (n, lb); returns min(distance, k+1) per row as an int32 array.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    n, la = a.shape
    n2, lb = b.shape
    if n != n2:
        raise ValueError("row counts differ")
    big = k + 1
    if abs(la - lb) > k:
        return np.full(n, big, dtype=np.int32)
    width = 2 * k + 1
    cur = np.full((n, width), big, dtype=np.int32)
    for o in range(width):
        j = o - k
        if 0 <= j <= min(lb, k):
            cur[:, o] = j
    for i in range(1, la + 1):
        prev = cur
        cur = np.full((n, width), big, dtype=np.int32)
        for o in range(width):
            j = i - k + o
            if j < 0 or j > lb:
                continue
            if j == 0:
                cur[:, o] = min(i, big)
                continue
            best = prev[:, o] + (a[:, i - 1] != b[:, j - 1])
            if o + 1 < width:
                best = np.minimum(best, prev[:, o + 1] + 1)
            if o - 1 >= 0:
                best = np.minimum(best, cur[:, o - 1] + 1)
            np.minimum(best, big, out=best)
            cur[:, o] = best
    return cur[:, lb - la + k].copy()
