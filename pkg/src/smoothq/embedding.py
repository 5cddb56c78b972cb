"""CGK edit-to-Hamming embedding and smooth q-gram generation.

The embedding walks a pointer over the input string for a fixed number of
steps. Each step copies the current character to the output and advances the
pointer by one random bit chosen by that character, so two strings at small
edit distance produce embeddings at small Hamming distance. A smooth q-gram
keeps a fixed random subset of the embedded coordinates; near-identical
q-grams then collide with a probability governed by match_probability().
"""

from __future__ import annotations

import numpy as np

from .core import ALPHABET, PAD_CODE, Randomness, decode_dna, encode_dna

_SIGMA = len(ALPHABET)


def cgk_embed(s: str, r_c: np.ndarray) -> str:
    """Embed a q-gram into a length-kappa string over ACGT plus the pad 'N'.

    Step j (1-based) consumes the dedicated bit block
    r_c[(j-1)*4 : j*4], selecting the bit indexed by the current character;
    the pointer advances by that bit. Once the input is exhausted the output
    is padded with 'N'. Deterministic in (s, r_c).
    """
    if r_c.ndim != 1 or r_c.size % _SIGMA != 0:
        raise ValueError("r_c length must be a multiple of the alphabet size")
    kappa = r_c.size // _SIGMA
    codes = encode_dna(s)
    if not 1 <= codes.size <= kappa:
        raise ValueError(f"input length {codes.size} outside [1, kappa={kappa}]")
    out = np.full(kappa, PAD_CODE, dtype=np.uint8)
    i = 0
    for j in range(kappa):
        if i >= codes.size:
            break
        c = codes[i]
        out[j] = c
        i += int(r_c[j * _SIGMA + c])
    return decode_dna(out)


def embed_batch(codes: np.ndarray, r_c: np.ndarray) -> np.ndarray:
    """Vectorized cgk_embed over an (n, q) code matrix; returns (n, kappa) codes.

    Agrees exactly with cgk_embed row by row (see the unit tests); used on
    the bulk path where one read contributes thousands of q-grams.
    """
    if codes.ndim != 2:
        raise ValueError("expected a 2-d code matrix")
    n, q = codes.shape
    kappa = r_c.size // _SIGMA
    if q > kappa:
        raise ValueError(f"q-gram length {q} exceeds kappa={kappa}")
    blocks = r_c.reshape(kappa, _SIGMA)
    out = np.full((n, kappa), PAD_CODE, dtype=np.uint8)
    ptr = np.zeros(n, dtype=np.int64)
    rows = np.arange(n)
    for j in range(kappa):
        active = ptr < q
        if not active.any():
            break
        ra = rows[active]
        ch = codes[ra, ptr[active]]
        out[ra, j] = ch
        ptr[active] += blocks[j, ch]
    return out


def generate_smooth_qgram(s: str, r_c: np.ndarray, r_s: np.ndarray) -> str:
    """Smooth q-gram of s: the embedded string restricted to r_s's one-bits."""
    embedded = cgk_embed(s, r_c)
    idx = np.flatnonzero(r_s)
    return "".join(embedded[int(i)] for i in idx)


def smooth_batch(codes: np.ndarray, rnd: Randomness) -> np.ndarray:
    """Vectorized smooth q-grams: (n, q) codes -> (n, m) codes."""
    return embed_batch(codes, rnd.r_c)[:, rnd.r_s_idx]


def match_probability(kappa: int, m: int, d_prime: int) -> float:
    """Probability that two embeddings at Hamming distance d_prime survive
    m-out-of-kappa subsampling with identical samples.

    Exact product ((kappa-m) * ... * (kappa-(d'-1)-m)) / (kappa * ... *
    (kappa-(d'-1))); 1.0 for d_prime == 0, 0.0 once d_prime > kappa - m.
    """
    if d_prime < 0:
        raise ValueError("d_prime must be >= 0")
    if not 0 <= m <= kappa:
        raise ValueError("need 0 <= m <= kappa")
    if d_prime > kappa - m:
        return 0.0
    prob = 1.0
    for l in range(d_prime):
        prob *= (kappa - m - l) / (kappa - l)
    return prob
