"""Synthetic long-read generator with exact ground truth.

Reads are windows of a uniform random reference, corrupted base by base at
the requested error rate. Error events split 50% insertion / 35% deletion /
15% substitution, the usual single-molecule profile. The true reference
placement of every read is recorded, so the set of truly overlapping pairs
is known exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import ReadSet, decode_dna

INSERT_FRACTION = 0.50
DELETE_FRACTION = 0.35
# remainder are substitutions


@dataclass
class GroundTruth:
    """Reference placement of each simulated read, plus derived pair truth."""

    names: list[str]
    origins: list[int]        # 1-based reference start
    strands: list[str]
    lengths: list[int]        # reference footprint length
    reference_length: int
    reference: Optional[str] = field(default=None, repr=False, compare=False)

    def overlap_length(self, a: int, b: int) -> int:
        """Length of the intersection of two reads' reference intervals."""
        start = max(self.origins[a], self.origins[b])
        end = min(self.origins[a] + self.lengths[a], self.origins[b] + self.lengths[b])
        return max(0, end - start)

    def pairs_with_min_overlap(self, gamma: int) -> set[tuple[int, int]]:
        """All index pairs (i, j), i < j, truly overlapping by >= gamma.

        Sweep over placements sorted by origin; a pair can only overlap
        while the later start is within the earlier read's footprint.
        """
        if gamma < 1:
            raise ValueError("gamma must be >= 1")
        n = len(self.names)
        order = sorted(range(n), key=lambda idx: self.origins[idx])
        out: set[tuple[int, int]] = set()
        active: list[int] = []
        for idx in order:
            start = self.origins[idx]
            active = [a for a in active if self.origins[a] + self.lengths[a] > start]
            for a in active:
                if self.overlap_length(a, idx) >= gamma:
                    out.add((min(a, idx), max(a, idx)))
            active.append(idx)
        return out


def _corrupt(window: np.ndarray, error_rate: float, rng: np.random.Generator) -> np.ndarray:
    """Apply per-base errors to a code window; one event costs one edit."""
    w = window.size
    if error_rate == 0 or w == 0:
        return window.copy()
    err = rng.random(w) < error_rate
    kind = rng.random(w)
    sub_shift = rng.integers(1, 4, size=w, dtype=np.uint8)
    ins_base = rng.integers(0, 4, size=w, dtype=np.uint8)

    ins = err & (kind < INSERT_FRACTION)
    dele = err & ~ins & (kind < INSERT_FRACTION + DELETE_FRACTION)
    sub = err & ~ins & ~dele

    base = window.copy()
    base[sub] = (base[sub] + sub_shift[sub]) % 4  # always a different base

    counts = np.ones(w, dtype=np.int64)
    counts[dele] = 0
    counts[ins] = 2
    out = base[np.repeat(np.arange(w), counts)]
    first_slot = np.cumsum(counts) - counts
    out[first_slot[ins]] = ins_base[ins]  # random base inserted before the original
    return out


def simulate_reads(
    reference_length: int,
    n_reads: int,
    mean_read_length: int,
    error_rate: float,
    seed: int,
    both_strands: bool = False,
    name_prefix: str = "read",
) -> tuple[ReadSet, GroundTruth]:
    """Generate reads from a fresh uniform random reference.

    Read footprints are uniform in [0.75, 1.25] * mean_read_length and start
    positions are uniform over placements that fit entirely inside the
    reference. Fully deterministic per seed. By default all reads come from
    the forward strand, matching the detector's default (no reverse
    complement ingest).
    """
    if n_reads < 2:
        raise ValueError("n_reads must be >= 2")
    if mean_read_length < 1:
        raise ValueError("mean_read_length must be >= 1")
    if not 0 <= error_rate < 1:
        raise ValueError("error_rate must be in [0, 1)")
    lo = max(1, round(0.75 * mean_read_length))
    hi = round(1.25 * mean_read_length)
    if hi > reference_length:
        raise ValueError(
            f"reads up to {hi} characters cannot fit a reference of length {reference_length}"
        )

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(100,))))
    ref_codes = rng.integers(0, 4, size=reference_length, dtype=np.uint8)

    lengths = rng.integers(lo, hi + 1, size=n_reads)
    starts = 1 + (rng.random(n_reads) * (reference_length - lengths + 1)).astype(np.int64)
    if both_strands:
        strands = np.where(rng.random(n_reads) < 0.5, "+", "-")
    else:
        strands = np.full(n_reads, "+")

    width = max(4, len(str(n_reads)))
    reads = ReadSet()
    names = []
    for idx in range(n_reads):
        start, length = int(starts[idx]), int(lengths[idx])
        window = ref_codes[start - 1 : start - 1 + length]
        if strands[idx] == "-":
            window = (3 - window)[::-1]
        name = f"{name_prefix}{idx + 1:0{width}d}"
        names.append(name)
        reads.add(name, decode_dna(_corrupt(window, error_rate, rng)))

    truth = GroundTruth(
        names=names,
        origins=[int(s) for s in starts],
        strands=[str(s) for s in strands],
        lengths=[int(l) for l in lengths],
        reference_length=reference_length,
        reference=decode_dna(ref_codes),
    )
    return reads, truth
