"""File formats: FASTA/FASTQ ingest, overlap TSV, ground-truth tables."""

from __future__ import annotations

import gzip
import logging
from typing import IO, NamedTuple, Optional, Sequence, Union

import numpy as np

from .core import ReadSet
from .pipeline import Overlap

log = logging.getLogger(__name__)

OVERLAP_HEADER = "# name_i\tlen_i\tp_i_start\tp_i_end\tname_j\tlen_j\tp_j_start\tp_j_end\tstrand\tn_matches"


class InputFormatError(Exception):
    """Base class for rejected input files."""


class UnreadableInputError(InputFormatError):
    pass


class EmptyInputError(InputFormatError):
    pass


class MalformedRecordError(InputFormatError):
    pass


class AlphabetError(InputFormatError):
    pass


_ACGT_BYTES = np.frombuffer(b"ACGT", dtype=np.uint8)


def _open_text(path: str) -> IO[str]:
    try:
        with open(path, "rb") as fh:
            magic = fh.read(2)
    except OSError as exc:
        raise UnreadableInputError(f"cannot read {path}: {exc}") from exc
    if magic == b"\x1f\x8b":
        return gzip.open(path, "rt")
    return open(path, "r")


def _normalize(name: str, seq: str, non_acgt: str) -> str:
    seq = seq.upper()
    raw = np.frombuffer(seq.encode("ascii"), dtype=np.uint8)
    bad = ~np.isin(raw, _ACGT_BYTES)
    n_bad = int(bad.sum())
    if n_bad == 0:
        return seq
    offset = int(np.argmax(bad))
    if non_acgt == "reject":
        raise AlphabetError(
            f"record {name!r}: non-ACGT character {seq[offset]!r} at offset {offset}"
        )
    masked = raw.copy()
    masked[bad] = ord("A")
    log.warning(
        "record %r: masked %d non-ACGT character(s) to 'A' (first at offset %d)",
        name, n_bad, offset,
    )
    return masked.tobytes().decode("ascii")


def read_fasta(path: str, non_acgt: str = "reject") -> ReadSet:
    """Load a FASTA or FASTQ file (plain or gzip), auto-detected by the
    leading '>' or '@'.

    Sequences are uppercased; characters outside ACGT either reject the file
    (naming the record and offset) or are masked to 'A' with a warning.
    FASTQ qualities are ignored.
    """
    if non_acgt not in ("reject", "mask"):
        raise ValueError("non_acgt must be 'reject' or 'mask'")
    fh = _open_text(path)
    with fh:
        try:
            lines = [line.rstrip("\n") for line in fh]
        except OSError as exc:
            raise UnreadableInputError(f"cannot read {path}: {exc}") from exc
    content = [ln for ln in lines if ln.strip()]
    if not content:
        raise EmptyInputError(f"{path}: no records found")
    first = content[0].lstrip()[0]
    if first == ">":
        return _parse_fasta(content, non_acgt, path)
    if first == "@":
        return _parse_fastq(content, non_acgt, path)
    raise MalformedRecordError(f"{path}: not FASTA or FASTQ (starts with {first!r})")


def _parse_fasta(lines: list[str], non_acgt: str, path: str) -> ReadSet:
    reads = ReadSet()
    name: Optional[str] = None
    chunks: list[str] = []

    def flush():
        if name is None:
            return
        seq = "".join(chunks)
        if not seq:
            raise MalformedRecordError(f"{path}: record {name!r} has no sequence")
        reads.add(name, _normalize(name, seq, non_acgt))

    for ln in lines:
        if ln.startswith(">"):
            flush()
            name = ln[1:].split()[0] if len(ln) > 1 and ln[1:].split() else ""
            if not name:
                raise MalformedRecordError(f"{path}: FASTA header without a name")
            chunks = []
        else:
            if name is None:
                raise MalformedRecordError(f"{path}: sequence data before any header")
            chunks.append(ln.strip())
    flush()
    return reads


def _parse_fastq(lines: list[str], non_acgt: str, path: str) -> ReadSet:
    if len(lines) % 4 != 0:
        raise MalformedRecordError(f"{path}: FASTQ record count is not a multiple of 4")
    reads = ReadSet()
    for rec in range(0, len(lines), 4):
        header, seq, plus, qual = lines[rec : rec + 4]
        if not header.startswith("@") or len(header) < 2:
            raise MalformedRecordError(f"{path}: bad FASTQ header at line {rec + 1}")
        if not plus.startswith("+"):
            raise MalformedRecordError(f"{path}: missing '+' line at line {rec + 3}")
        if len(qual) != len(seq):
            raise MalformedRecordError(
                f"{path}: quality length differs from sequence length at line {rec + 4}"
            )
        name = header[1:].split()[0]
        reads.add(name, _normalize(name, seq.strip(), non_acgt))
    return reads


class OverlapLine(NamedTuple):
    """One parsed row of the overlap TSV."""

    name_i: str
    len_i: int
    p_i_s: int
    p_i_e: int
    name_j: str
    len_j: int
    p_j_s: int
    p_j_e: int
    strand: str
    n_matches: int


OverlapItem = Union[Overlap, tuple[Overlap, str]]


def write_overlaps(items: Sequence[OverlapItem], reads: ReadSet, path: str) -> None:
    """Write one tab-separated line per overlap, sorted by (name_i, name_j).

    Coordinates are 1-based inclusive q-gram start positions. Items may be
    bare overlaps (strand '+') or (overlap, strand) tuples.
    """
    rows = []
    for item in items:
        ov, strand = item if isinstance(item, tuple) else (item, "+")
        rows.append(
            (
                reads.names[ov.i], len(reads.seqs[ov.i]), ov.p_i_s, ov.p_i_e,
                reads.names[ov.j], len(reads.seqs[ov.j]), ov.p_j_s, ov.p_j_e,
                strand, ov.n_matches,
            )
        )
    rows.sort(key=lambda r: (r[0], r[4], r[2], r[6]))
    with open(path, "w") as fh:
        fh.write(OVERLAP_HEADER + "\n")
        for row in rows:
            fh.write("\t".join(str(v) for v in row) + "\n")


def read_overlaps(path: str) -> list[OverlapLine]:
    out = []
    with _open_text(path) as fh:
        for lineno, ln in enumerate(fh, 1):
            ln = ln.rstrip("\n")
            if not ln or ln.startswith("#"):
                continue
            parts = ln.split("\t")
            if len(parts) != 10:
                raise MalformedRecordError(f"{path}:{lineno}: expected 10 columns, got {len(parts)}")
            try:
                out.append(
                    OverlapLine(
                        parts[0], int(parts[1]), int(parts[2]), int(parts[3]),
                        parts[4], int(parts[5]), int(parts[6]), int(parts[7]),
                        parts[8], int(parts[9]),
                    )
                )
            except ValueError as exc:
                raise MalformedRecordError(f"{path}:{lineno}: {exc}") from exc
    return out


def write_truth(truth, path: str) -> None:
    """Write simulator ground truth: reference length header plus one row
    (name, 1-based origin, strand, reference footprint length) per read."""
    with open(path, "w") as fh:
        fh.write(f"#reference_length={truth.reference_length}\n")
        fh.write("# name\torigin\tstrand\tlength\n")
        for name, origin, strand, length in zip(
            truth.names, truth.origins, truth.strands, truth.lengths
        ):
            fh.write(f"{name}\t{origin}\t{strand}\t{length}\n")


def read_truth(path: str):
    from .simulate import GroundTruth

    reference_length = None
    names, origins, strands, lengths = [], [], [], []
    with _open_text(path) as fh:
        for lineno, ln in enumerate(fh, 1):
            ln = ln.rstrip("\n")
            if not ln:
                continue
            if ln.startswith("#"):
                if ln.startswith("#reference_length="):
                    reference_length = int(ln.split("=", 1)[1])
                continue
            parts = ln.split("\t")
            if len(parts) != 4:
                raise MalformedRecordError(f"{path}:{lineno}: expected 4 columns")
            names.append(parts[0])
            origins.append(int(parts[1]))
            strands.append(parts[2])
            lengths.append(int(parts[3]))
    if reference_length is None:
        raise MalformedRecordError(f"{path}: missing #reference_length header")
    if not names:
        raise EmptyInputError(f"{path}: no truth rows")
    return GroundTruth(
        names=names, origins=origins, strands=strands, lengths=lengths,
        reference_length=reference_length,
    )


def read_qgrams(path: str, expected_q: Optional[int] = None) -> list[str]:
    """Load one q-gram per line; all lines must share one length over ACGT."""
    grams = []
    with _open_text(path) as fh:
        for lineno, ln in enumerate(fh, 1):
            ln = ln.strip()
            if not ln or ln.startswith("#"):
                continue
            grams.append(ln.upper())
    if not grams:
        raise EmptyInputError(f"{path}: no q-grams found")
    q = len(grams[0]) if expected_q is None else expected_q
    for idx, g in enumerate(grams):
        if len(g) != q:
            raise MalformedRecordError(
                f"{path}: q-gram {idx + 1} has length {len(g)}, expected {q}"
            )
        if any(ch not in "ACGT" for ch in g):
            raise AlphabetError(f"{path}: q-gram {idx + 1} contains non-ACGT characters")
    return grams
