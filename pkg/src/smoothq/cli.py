"""Command line front end: overlap, simjoin, simulate, eval, qgram-stats."""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional

from .core import Params, ReadSet
from .dataio import (
    InputFormatError,
    read_fasta,
    read_overlaps,
    read_qgrams,
    read_truth,
    write_overlaps,
    write_truth,
)
from .evaluate import EvalConfig, count_matched_qgrams, evaluate
from .index import find_similar_qgram_pairs
from .pipeline import PipelineStats, collapse_strand_twins, find_overlaps
from .simulate import simulate_reads

log = logging.getLogger("smoothq")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


class _Parser(argparse.ArgumentParser):
    # usage problems exit 1; argparse's default of 2 is reserved for bad input files
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_param_flags(sub: argparse.ArgumentParser) -> None:
    grp = sub.add_argument_group("tuning parameters")
    grp.add_argument("--q", type=int, default=14, help="q-gram length (default 14)")
    grp.add_argument("--m", type=int, default=None,
                     help="smooth q-gram length (default 1.5*q)")
    grp.add_argument("--kappa", type=int, default=None,
                     help="embedded q-gram length (default 2*q)")
    grp.add_argument("--alpha", type=float, default=0.15,
                     help="signature selection rate (default 0.15)")
    grp.add_argument("--eta", type=float, default=1e-4,
                     help="frequency filter threshold; 1 disables (default 1e-4)")
    grp.add_argument("--K", type=int, default=2,
                     help="edit distance threshold for q-gram matches (default 2)")
    grp.add_argument("--C", type=int, default=3,
                     help="minimum matched signatures per pair (default 3)")
    grp.add_argument("--L", type=int, default=500,
                     help="targeting overlap length (default 500)")
    grp.add_argument("--epsilon", type=float, default=0.2,
                     help="error tolerance rate (default 0.2)")
    grp.add_argument("--d", type=int, default=1,
                     help="number of CGK embeddings (default 1)")
    grp.add_argument("--z", type=int, default=1,
                     help="number of subsamplings (default 1)")
    grp.add_argument("--seed", type=int, default=0, help="randomness seed (default 0)")


def _params_from_args(args, q: Optional[int] = None) -> Params:
    q = args.q if q is None else q
    return Params(
        q=q,
        m=args.m if args.m is not None else round(1.5 * q),
        kappa=args.kappa if args.kappa is not None else 2 * q,
        alpha=args.alpha,
        eta=args.eta,
        K=args.K,
        C=args.C,
        L=args.L,
        epsilon=args.epsilon,
        d=args.d,
        z=args.z,
        seed=args.seed,
    )


def _cmd_overlap(args) -> int:
    params = _params_from_args(args)
    reads = read_fasta(args.input, non_acgt=args.non_acgt)
    log.info("loaded %d reads from %s", len(reads), args.input)
    stats = PipelineStats()
    if args.reverse_complement:
        extended = reads.with_reverse_complements()
        raw = find_overlaps(extended, params, stats)
        items = collapse_strand_twins(raw, extended, len(reads), params.q)
    else:
        items = find_overlaps(reads, params, stats)
    log.info(
        "signatures=%d filtered=%d searched=%d candidates=%d overlaps=%d "
        "(verify rejected %d, empty box %d)",
        stats.n_signatures, stats.n_after_filter, stats.n_searched,
        stats.n_candidate_pairs, stats.n_verified,
        stats.n_rejected_verify, stats.n_dropped_empty_box,
    )
    write_overlaps(items, reads, args.output)
    n = len(items)
    print(f"wrote {n} overlap{'s' if n != 1 else ''} to {args.output}")
    return EXIT_OK


def _cmd_simjoin(args) -> int:
    grams = read_qgrams(args.input)
    params = _params_from_args(args, q=len(grams[0]) if args.infer_q else None)
    if any(len(g) != params.q for g in grams):
        raise InputFormatError(
            f"{args.input}: q-gram lengths do not match q={params.q} "
            "(use --infer-q to take q from the file)"
        )
    pairs = find_similar_qgram_pairs(grams, params)
    with open(args.output, "w") if args.output != "-" else _stdout() as fh:
        fh.write(f"# i\tj\tqgram_i\tqgram_j (K={params.K}, d={params.d}, z={params.z}, "
                 f"eta={params.eta}, seed={params.seed})\n")
        for a, b in pairs:
            fh.write(f"{a}\t{b}\t{grams[a]}\t{grams[b]}\n")
    log.info("found %d similar q-gram pairs among %d q-grams", len(pairs), len(grams))
    return EXIT_OK


class _stdout:
    def __enter__(self):
        return sys.stdout

    def __exit__(self, *exc):
        return False


def _cmd_simulate(args) -> int:
    reads, truth = simulate_reads(
        reference_length=args.reference_length,
        n_reads=args.n_reads,
        mean_read_length=args.mean_read_length,
        error_rate=args.error_rate,
        seed=args.seed,
        both_strands=args.both_strands,
    )
    with open(args.reads, "w") as fh:
        for name, seq, _ in reads:
            fh.write(f">{name}\n{seq}\n")
    write_truth(truth, args.truth)
    if args.reference_out:
        with open(args.reference_out, "w") as fh:
            fh.write(f">reference\n{truth.reference}\n")
    print(f"wrote {len(reads)} reads to {args.reads}, truth to {args.truth}")
    return EXIT_OK


def _cmd_eval(args) -> int:
    truth = read_truth(args.truth)
    lines = read_overlaps(args.overlaps)
    reported = [
        (ln.name_i, ln.name_j,
         min(ln.p_i_e - ln.p_i_s, ln.p_j_e - ln.p_j_s) + args.q)
        for ln in lines
    ]
    report = evaluate(reported, truth, EvalConfig(gamma=args.gamma, q=args.q))
    print(report.text())
    print(report.summary_line())
    return EXIT_OK


def _cmd_qgram_stats(args) -> int:
    reads = read_fasta(args.input, non_acgt=args.non_acgt)
    pairs = None
    if args.pairs:
        index = {name: idx for idx, name in enumerate(reads.names)}
        pairs = []
        with open(args.pairs) as fh:
            for lineno, ln in enumerate(fh, 1):
                ln = ln.strip()
                if not ln or ln.startswith("#"):
                    continue
                parts = ln.split("\t")
                if len(parts) < 2:
                    raise InputFormatError(f"{args.pairs}:{lineno}: expected two names")
                try:
                    pairs.append((index[parts[0]], index[parts[1]]))
                except KeyError as exc:
                    raise InputFormatError(
                        f"{args.pairs}:{lineno}: unknown read name {exc.args[0]!r}"
                    ) from exc
    stats = count_matched_qgrams(
        reads, q=args.q, max_ed=args.max_ed, pairs=pairs, max_pairs=args.max_pairs
    )
    out = sys.stdout if args.output == "-" else open(args.output, "w")
    try:
        out.write(f"# pairs={stats.n_pairs} q={args.q}\n")
        out.write("ed\tpairs\tavg_per_pair\n")
        for e in range(args.max_ed + 1):
            out.write(f"{e}\t{int(stats.counts[e])}\t{stats.averages[e]:.4f}\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="smoothq",
                     description="Smooth q-gram matching and long-read overlap detection.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("overlap", parents=[], help="detect overlapping read pairs")
    p.add_argument("input", help="FASTA/FASTQ file (plain or gzip)")
    p.add_argument("-o", "--output", default="overlaps.tsv", help="output TSV path")
    p.add_argument("--non-acgt", choices=("reject", "mask"), default="reject")
    p.add_argument("--reverse-complement", action="store_true",
                   help="also match reads against reverse complements")
    _add_param_flags(p)
    p.set_defaults(func=_cmd_overlap)

    p = subs.add_parser("simjoin", help="find q-gram pairs within edit distance K")
    p.add_argument("input", help="text file, one q-gram per line")
    p.add_argument("-o", "--output", default="-", help="output TSV path (default stdout)")
    p.add_argument("--infer-q", action="store_true",
                   help="take q from the first line of the input")
    _add_param_flags(p)
    p.set_defaults(func=_cmd_simjoin)

    p = subs.add_parser("simulate", help="generate synthetic reads with ground truth")
    p.add_argument("--reference-length", type=int, required=True)
    p.add_argument("--n-reads", type=int, required=True)
    p.add_argument("--mean-read-length", type=int, required=True)
    p.add_argument("--error-rate", type=float, default=0.15)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--both-strands", action="store_true")
    p.add_argument("--reads", default="reads.fasta", help="output FASTA path")
    p.add_argument("--truth", default="truth.tsv", help="output truth table path")
    p.add_argument("--reference-out", default=None, help="optionally write the reference FASTA")
    p.set_defaults(func=_cmd_simulate)

    p = subs.add_parser("eval", help="score an overlap report against simulator truth")
    p.add_argument("--overlaps", required=True, help="overlap TSV from 'overlap'")
    p.add_argument("--truth", required=True, help="truth table from 'simulate'")
    p.add_argument("--gamma", type=int, default=500, help="minimum overlap length")
    p.add_argument("--q", type=int, default=14,
                   help="q-gram length used by the detector (converts spans to lengths)")
    p.set_defaults(func=_cmd_eval)

    p = subs.add_parser("qgram-stats",
                        help="brute-force histogram of matched q-gram pairs by edit distance")
    p.add_argument("input", help="FASTA/FASTQ file")
    p.add_argument("--q", type=int, default=14)
    p.add_argument("--max-ed", type=int, default=2)
    p.add_argument("--pairs", default=None,
                   help="TSV of read name pairs to compare (default: all pairs)")
    p.add_argument("--max-pairs", type=int, default=200,
                   help="refuse jobs above this many read pairs")
    p.add_argument("--non-acgt", choices=("reject", "mask"), default="reject")
    p.add_argument("-o", "--output", default="-", help="output TSV path (default stdout)")
    p.set_defaults(func=_cmd_qgram_stats)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except InputFormatError as exc:
        print(f"smoothq: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"smoothq: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"smoothq: internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
