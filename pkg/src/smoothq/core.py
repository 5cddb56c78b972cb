"""Core domain types: tuning parameters, derived randomness, reads, signatures."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

ALPHABET = "ACGT"
PAD_CHAR = "N"  # embedding pad symbol, distinct from the DNA alphabet
PAD_CODE = 4

_CHAR2CODE = np.full(256, 255, dtype=np.uint8)
for _idx, _ch in enumerate(ALPHABET + PAD_CHAR):
    _CHAR2CODE[ord(_ch)] = _idx
_CODE2CHAR = np.frombuffer((ALPHABET + PAD_CHAR).encode("ascii"), dtype=np.uint8)

_MASK64 = np.uint64(0xFFFFFFFFFFFFFFFF)
# 21 symbols of 3 bits each fit one 64-bit word
_CODES_PER_WORD = 21


def encode_dna(s: str, allow_pad: bool = False) -> np.ndarray:
    """Map a string over ACGT (optionally plus N) to uint8 codes 0..4."""
    raw = np.frombuffer(s.encode("ascii"), dtype=np.uint8)
    codes = _CHAR2CODE[raw]
    limit = PAD_CODE if allow_pad else PAD_CODE - 1
    if codes.size and codes.max() > limit:
        bad = int(np.argmax(codes > limit))
        raise ValueError(f"non-ACGT character {s[bad]!r} at offset {bad}")
    return codes


def decode_dna(codes: np.ndarray) -> str:
    return _CODE2CHAR[codes].tobytes().decode("ascii")


@dataclass(frozen=True)
class Params:
    """Global tuning knobs for smooth q-gram construction and overlap search.

    Defaults follow the standard operating point for long-read overlap
    detection: q-grams of length 14 embedded to twice their length, smooth
    q-grams of 21 characters, a 15% signature selection rate, and a
    3-colinear-match acceptance threshold.
    """

    q: int = 14            # q-gram length
    m: int = 21            # smooth q-gram length
    kappa: int = 28        # embedded q-gram length
    alpha: float = 0.15    # signature selection rate
    eta: float = 1e-4      # frequency filtering threshold; 1 disables the filter
    K: int = 2             # edit distance threshold for q-gram matches
    C: int = 3             # minimum number of matched signatures per pair
    L: int = 500           # targeting overlap length
    epsilon: float = 0.2   # error tolerance rate
    d: int = 1             # number of CGK embeddings
    z: int = 1             # number of subsamplings
    seed: int = 0          # master randomness seed

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("q must be >= 1")
        if self.kappa < self.q:
            raise ValueError("kappa must be >= q")
        if not 1 <= self.m <= self.kappa:
            raise ValueError("m must satisfy 1 <= m <= kappa")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must be in (0, 1]")
        if not 0 < self.eta <= 1:
            raise ValueError("eta must be in (0, 1]")
        if self.K < 0:
            raise ValueError("K must be >= 0")
        if self.C < 1:
            raise ValueError("C must be >= 1")
        if self.L < 1:
            raise ValueError("L must be >= 1")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must be in (0, 1)")
        if self.d < 1 or self.z < 1:
            raise ValueError("d and z must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")


def _mix64(words: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer, elementwise on uint64 arrays."""
    z = words.copy()
    z ^= z >> np.uint64(30)
    z *= np.uint64(0xBF58476D1CE4E5B9)
    z ^= z >> np.uint64(27)
    z *= np.uint64(0x94D049BB133111EB)
    z ^= z >> np.uint64(31)
    return z


def pack_words(codes: np.ndarray) -> np.ndarray:
    """Pack (n, m) symbol codes into (n, ceil(m/21)) uint64 words, 3 bits per symbol.

    The packing is injective for any fixed m, so word equality is exactly
    string equality.
    """
    if codes.ndim != 2:
        raise ValueError("expected a 2-d code array")
    n, m = codes.shape
    n_words = max(1, math.ceil(m / _CODES_PER_WORD))
    words = np.zeros((n, n_words), dtype=np.uint64)
    for col in range(m):
        w = col // _CODES_PER_WORD
        words[:, w] = (words[:, w] << np.uint64(3)) | codes[:, col].astype(np.uint64)
    return words


@dataclass(frozen=True)
class Randomness:
    """Randomness bundle for one (embedding, subsampling) round.

    r_c drives the CGK embedding (4 bits per embedding step), r_s is the
    subsampling mask with exactly m one-bits, and the hash-rank keys back a
    keyed 64-bit mix that maps smooth q-grams into (0, 1).
    """

    r_c: np.ndarray                  # uint8 bits, length kappa * |alphabet|
    r_s: np.ndarray                  # uint8 bits, length kappa, popcount == m
    rank_key0: int
    rank_key1: int
    r_s_idx: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.r_c.ndim != 1 or self.r_c.size % len(ALPHABET) != 0:
            raise ValueError("r_c length must be a multiple of the alphabet size")
        object.__setattr__(self, "r_s_idx", np.flatnonzero(self.r_s))

    @property
    def kappa(self) -> int:
        return self.r_c.size // len(ALPHABET)

    @property
    def m(self) -> int:
        return int(self.r_s_idx.size)

    def rank_words(self, words: np.ndarray) -> np.ndarray:
        """Hash ranks in (0, 1) for packed smooth q-grams, vectorized."""
        h = np.full(words.shape[0], np.uint64(self.rank_key0))
        k1 = np.uint64(self.rank_key1)
        for col in range(words.shape[1]):
            h = _mix64(h ^ (words[:, col] + k1))
        return (h.astype(np.float64) + 0.5) * 2.0**-64

    def rank(self, t: str) -> float:
        """Hash rank of a single smooth q-gram string."""
        codes = encode_dna(t, allow_pad=True).reshape(1, -1)
        return float(self.rank_words(pack_words(codes))[0])


def derive_randomness(seed: int, j: int, k: int, params: Params) -> Randomness:
    """Derive the round-(j, k) randomness bundle from the master seed.

    The CGK bits depend only on (seed, j) and the subsampling mask only on
    (seed, k), so adding embeddings or subsamplings extends the set of rounds
    without perturbing earlier ones. The derivation is deterministic:
    identical arguments give bit-identical bundles.
    """
    if params.m > params.kappa:
        raise ValueError("m must not exceed kappa")
    if not 1 <= j <= params.d:
        raise ValueError(f"embedding index {j} outside [1, {params.d}]")
    if not 1 <= k <= params.z:
        raise ValueError(f"subsampling index {k} outside [1, {params.z}]")

    rng_c = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(1, j))))
    r_c = rng_c.integers(0, 2, size=params.kappa * len(ALPHABET), dtype=np.uint8)

    rng_s = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(2, k))))
    ones = rng_s.permutation(params.kappa)[: params.m]
    r_s = np.zeros(params.kappa, dtype=np.uint8)
    r_s[ones] = 1

    rng_h = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(3, 0))))
    key0, key1 = (int(v) for v in rng_h.integers(0, 2**64, size=2, dtype=np.uint64))
    return Randomness(r_c=r_c, r_s=r_s, rank_key0=key0, rank_key1=key1)


class Signature(NamedTuple):
    """One q-gram occurrence: smooth q-gram, hash rank, read index, 1-based position.

    The q-gram itself is recovered as reads.seqs[i][p-1 : p-1+q] rather than
    stored redundantly.
    """

    t: str
    r: float
    i: int
    p: int


class ReadSet:
    """Ordered collection of named DNA sequences over ACGT.

    Read indices are 0-based positions in this collection and stay stable for
    the lifetime of the object. Positions inside a read are 1-based.
    """

    def __init__(self):
        self.names: list[str] = []
        self.seqs: list[str] = []
        self.strands: list[str] = []

    def add(self, name: str, seq: str, strand: str = "+") -> None:
        encode_dna(seq)  # rejects anything outside ACGT
        self.names.append(name)
        self.seqs.append(seq)
        self.strands.append(strand)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[str, str]]) -> "ReadSet":
        rs = cls()
        for name, seq in pairs:
            rs.add(name, seq)
        return rs

    def __len__(self) -> int:
        return len(self.seqs)

    def __iter__(self):
        return iter(zip(self.names, self.seqs, self.strands))

    def with_reverse_complements(self) -> "ReadSet":
        """Append each read's reverse complement as a '-'-strand twin.

        Twin of read i sits at index i + n; names are shared with the
        original so reporting can collapse strand pairs.
        """
        rs = ReadSet()
        for name, seq, strand in self:
            rs.add(name, seq, strand)
        for name, seq, _ in self:
            rs.add(name, reverse_complement(seq), "-")
        return rs


_COMPLEMENT = str.maketrans("ACGT", "TGCA")


def reverse_complement(seq: str) -> str:
    return seq.translate(_COMPLEMENT)[::-1]
