import argparse
import logging
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import inquirer
from dotenv import load_dotenv
from yaspin import yaspin

from dna_codec import analysis, archive, codec, corpus, mapping, utils
from dna_codec.constants import (CAPACITY_M3, DEFAULT_ALPHA, DEFAULT_LENGTH,
                                 DEFAULT_MAX_ITERATIONS, DEFAULT_MAX_RUN,
                                 DEFAULT_SYMBOL_BITS, ArchiveFormat, GcScope,
                                 MappingMethod)
from dna_codec.exceptions import (DecodeError, DomainError,
                                  EncodingFailedError, InfeasibleError,
                                  MissingSidecarError)
from dna_codec.sequence import ConstraintSet

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ENCODING_FAILED = 3
EXIT_DECODE_FAILED = 4


@dataclass(frozen=True)
class RunReport:
    """
    End-to-end accounting of one encode run. The density counts every
    synthesized nucleotide, r prefixes included.
    """

    input_bits: int
    compressed_bits: int
    strand_count: int
    total_nt: int
    histogram: analysis.IterationHistogram
    params: codec.CodecParams
    padded_tails: int = 0

    @classmethod
    def from_archive(
        cls, encoded: codec.EncodedArchive, log: codec.EncodeLog, params: codec.CodecParams
    ) -> "RunReport":
        return cls(
            input_bits=encoded.header.original_bit_length,
            compressed_bits=encoded.header.compressed_bit_length,
            strand_count=len(encoded.strands),
            total_nt=encoded.total_nt,
            histogram=analysis.iteration_histogram(log, params.max_iterations),
            params=params,
            padded_tails=len(log.padded_tails),
        )

    @property
    def density(self) -> float:
        return self.input_bits / self.total_nt

    def render(self) -> str:
        constraints = self.params.constraints
        rows = [
            ("method", self.params.method.value),
            ("m / alpha / n / I", f"{self.params.m} / {float(constraints.alpha):g} / {self.params.n} / {self.params.max_iterations}"),
            ("source coding", f"k={self.params.k}" if self.params.k else "none"),
            ("input bits", self.input_bits),
            ("stored bits", self.compressed_bits),
            ("strands", self.strand_count),
            ("total nt", self.total_nt),
            ("density", f"{self.density:.4f} bits/nt"),
            ("iterations", " ".join(str(c) for c in self.histogram.counts)),
            ("padded tails", self.padded_tails),
        ]
        return utils.format_table(("field", "value"), rows)


def _fail(message: str, code: int):
    print(f"❌ {message}", file=sys.stderr)
    sys.exit(code)


def _confirm_overwrite(paths, force: bool) -> None:
    existing = [p for p in paths if Path(p).exists()]
    if not existing or force:
        return
    names = ", ".join(utils.get_bold_text(str(p)) for p in existing)
    question = [
        inquirer.Confirm("confirm", message=f"Overwrite {names}?", default=False),
    ]
    answers = inquirer.prompt(question)
    if not answers or not answers["confirm"]:
        _fail("Output exists, nothing written (use --force to overwrite)", EXIT_USAGE)


def _alpha(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid alpha {text!r}")


def build_parser() -> argparse.ArgumentParser:
    """
    Builds the command line parser. Flag defaults come from DNA_CODEC_*
    environment variables when set.
    """
    method = utils.env_default("DNA_CODEC_METHOD", MappingMethod.BLOCK11.value, lambda v: MappingMethod(v).value)
    max_run = utils.env_default("DNA_CODEC_MAX_RUN", DEFAULT_MAX_RUN, int)
    alpha = utils.env_default("DNA_CODEC_ALPHA", Fraction(DEFAULT_ALPHA), Fraction)
    length = utils.env_default("DNA_CODEC_LENGTH", DEFAULT_LENGTH, int)
    max_iter = utils.env_default("DNA_CODEC_MAX_ITER", DEFAULT_MAX_ITERATIONS, int)
    symbol_bits = utils.env_default("DNA_CODEC_SYMBOL_BITS", DEFAULT_SYMBOL_BITS, int)

    parser = argparse.ArgumentParser(
        prog="dnacodec",
        description="Encode files into GC-balanced, run-length limited DNA strands.",
    )
    parser.add_argument("--verbose", action="store_true", help="Log every encoding attempt.")
    commands = parser.add_subparsers(dest="command", required=True)

    encode = commands.add_parser("encode", help="Encode a file into a DNA archive.")
    encode.add_argument("input", help="File to encode.")
    encode.add_argument("output", help="Archive path (FASTA, or container with --format container).")
    encode.add_argument(
        "--method",
        choices=[m.value for m in MappingMethod],
        default=method,
        help=f"M-ary mapping method (default: {method}).",
    )
    encode.add_argument("-m", "--max-run", type=int, default=max_run, help=f"Maximum run length (default: {max_run}).")
    encode.add_argument("--alpha", type=_alpha, default=alpha, help=f"GC deviation from 0.5 (default: {alpha}).")
    encode.add_argument("-n", "--length", type=int, default=length, help=f"Payload nt per strand (default: {length}).")
    encode.add_argument("--max-iter", type=int, default=max_iter, help=f"Iterations per strand, at most 4 (default: {max_iter}).")
    coding = encode.add_mutually_exclusive_group()
    coding.add_argument("-k", "--symbol-bits", type=int, default=symbol_bits, help=f"Huffman symbol width in bits (default: {symbol_bits}).")
    coding.add_argument("--no-source-coding", action="store_true", help="Skip Huffman source coding.")
    encode.add_argument("--forbid", action="append", default=[], metavar="PATTERN", help="Pattern no strand may contain (repeatable).")
    encode.add_argument(
        "--gc-scope",
        choices=[s.value for s in GcScope],
        default=GcScope.PAYLOAD_ONLY.value,
        help="Region the GC ratio is measured over (default: payload_only).",
    )
    encode.add_argument("--pad-tail", action="store_true", help="Pad the last strand to the full length.")
    encode.add_argument("--dump-codebook", metavar="PATH", help="Also write the Huffman codebook as hex,length,code lines.")
    encode.add_argument(
        "--format",
        choices=[f.value for f in ArchiveFormat],
        default=ArchiveFormat.FASTA.value,
        help="Archive format (default: fasta).",
    )
    encode.add_argument("--force", action="store_true", help="Overwrite existing output without asking.")

    decode = commands.add_parser("decode", help="Restore a file from a DNA archive.")
    decode.add_argument("archive", help="FASTA archive (with its .meta sidecar) or container.")
    decode.add_argument("output", help="Restored file.")
    decode.add_argument("--force", action="store_true", help="Overwrite existing output without asking.")

    analyze = commands.add_parser("analyze", help="Print closed-form analyses.")
    analyze.add_argument("--min-alpha", nargs=3, metavar=("I", "N", "EPS"), help="Smallest alpha for I iterations, length n and failure eps.")
    analyze.add_argument("--density", type=int, metavar="M", help="Information density and coding efficiency for run length m.")
    analyze.add_argument("--bit-error", action="store_true", help="Average bit error of the greedy table against a random one.")
    analyze.add_argument("--gc-dist", type=int, metavar="N", help="GC-count distribution of an n-nt payload.")
    analyze.add_argument("--alpha-grid", action="store_true", help="Minimum alpha grid for I in {4, 8}.")
    analyze.add_argument("--simulate", nargs=3, metavar=("N", "ALPHA", "TRIALS"), help="Monte Carlo balance frequency.")
    analyze.add_argument("--seed", type=int, default=0, help="Seed for --simulate (default: 0).")

    table = commands.add_parser("table", help="Print or rebuild the 48-ary mapping table.")
    action = table.add_mutually_exclusive_group(required=True)
    action.add_argument("--emit", action="store_true", help="Print the canonical table as symbol,tuple lines.")
    action.add_argument("--rebuild-greedy", action="store_true", help="Rebuild the table greedily and diff it.")
    table.add_argument("--substitutions", help="from,to,probability file replacing the built-in matrix.")

    corpus_cmd = commands.add_parser("corpus", help="Write a bundled test file.")
    corpus_cmd.add_argument("kind", choices=["poem", "image"], help="Which file to write.")
    corpus_cmd.add_argument("output", help="Destination path.")
    corpus_cmd.add_argument("--width", type=int, default=256)
    corpus_cmd.add_argument("--height", type=int, default=256)
    corpus_cmd.add_argument("--seed", type=int, default=corpus.DEFAULT_IMAGE_SEED)
    corpus_cmd.add_argument("--force", action="store_true", help="Overwrite existing output without asking.")
    return parser


def _params_from_args(args) -> codec.CodecParams:
    constraints = ConstraintSet(
        max_run=args.max_run,
        alpha=args.alpha,
        forbidden_patterns=tuple(args.forbid),
        gc_scope=GcScope(args.gc_scope),
    )
    return codec.CodecParams(
        method=MappingMethod(args.method),
        m=args.max_run,
        constraints=constraints,
        n=args.length,
        max_iterations=args.max_iter,
        k=None if args.no_source_coding else args.symbol_bits,
        trim_tail=not args.pad_tail,
    )


def cmd_encode(args) -> None:
    input_path = Path(args.input)
    if not input_path.is_file():
        _fail(f"File {utils.get_bold_text(args.input)} does not exist", EXIT_USAGE)
    params = _params_from_args(args)
    fmt = ArchiveFormat(args.format)
    outputs = [Path(args.output)]
    if fmt is ArchiveFormat.FASTA:
        outputs.append(archive.sidecar_path(args.output))
    if args.dump_codebook:
        if params.k is None:
            _fail("--dump-codebook needs source coding", EXIT_USAGE)
        outputs.append(Path(args.dump_codebook))
    _confirm_overwrite(outputs, args.force)

    data = utils.bytes_to_bits(input_path.read_bytes())
    if not data:
        _fail(f"File {utils.get_bold_text(args.input)} is empty", EXIT_USAGE)

    log = codec.EncodeLog()
    spinner = yaspin(text=f"🔧 Encoding {utils.get_bold_text(args.input)}...")
    spinner.start()
    try:
        encoded = codec.encode(data, params, log=log)
        written = archive.write_archive(encoded, args.output, fmt)
        if args.dump_codebook:
            utils.atomic_write(args.dump_codebook, (encoded.header.codebook.dump() + "\n").encode("ascii"))
            written.append(Path(args.dump_codebook))
    finally:
        spinner.stop()

    print(f"✅ Wrote {', '.join(utils.get_bold_text(str(p)) for p in written)}")
    print(RunReport.from_archive(encoded, log, params).render())


def cmd_decode(args) -> None:
    if not Path(args.archive).is_file():
        _fail(f"Archive {utils.get_bold_text(args.archive)} does not exist", EXIT_USAGE)
    _confirm_overwrite([args.output], args.force)

    spinner = yaspin(text=f"🔧 Decoding {utils.get_bold_text(args.archive)}...")
    spinner.start()
    try:
        encoded = archive.read_archive(args.archive)
        data = codec.decode(encoded)
    finally:
        spinner.stop()

    if len(data) % 8:
        _fail(f"Decoded {len(data)} bits, not a whole number of bytes", EXIT_DECODE_FAILED)
    utils.atomic_write(args.output, utils.bits_to_bytes(data))
    print(f"✅ Restored {utils.get_bold_text(args.output)} ({len(data) // 8} bytes, {len(encoded.strands)} strands)")


def _print_min_alpha(args) -> None:
    iterations, n, epsilon = int(args.min_alpha[0]), int(args.min_alpha[1]), float(args.min_alpha[2])
    alpha = analysis.min_alpha(analysis.symbol_gc_distribution(), n, iterations, epsilon)
    print(f"📊 Minimum alpha for I={iterations}, n={n}, eps={epsilon:g}: {float(alpha):g}")


def _print_density(m: int) -> None:
    rows = [
        (row.m, row.alphabet, f"{row.density:.4f}", f"{row.efficiency:.1%}")
        for row in analysis.density_table([m])
    ]
    print(utils.format_table(("m", "M", "bits/nt", f"efficiency @ {CAPACITY_M3}"), rows))


def _print_bit_error() -> None:
    summary = analysis.bit_error_summary()
    rows = [
        (f"{src}->{dst}", f"{float(value):.3f}")
        for (src, dst), value in sorted(summary.per_pair.items())
    ]
    print(utils.format_table(("pair", "average bit error"), rows))
    print(f"📊 Greedy table: {float(summary.greedy):.4f} bits")
    print(f"📊 Random table: {float(summary.random):.4f} bits")
    print(f"🚀 Reduction: {summary.reduction:.1%}")


def _print_gc_dist(n: int) -> None:
    distribution = analysis.gc_count_distribution(
        analysis.symbol_gc_distribution(), n, allow_partial_block=True
    )
    rows = [(j, f"{float(value):.6e}") for j, value in enumerate(distribution.a)]
    print(utils.format_table(("gc count", "probability"), rows))


def _print_alpha_grid() -> None:
    grid = analysis.min_alpha_grid()
    ns = analysis.ALPHA_GRID_LENGTHS
    rows = [(f"I={i}", *(f"{float(grid[i][n]):g}" for n in ns)) for i in grid]
    print(utils.format_table(("", *(f"n={n}" for n in ns)), rows))


def _print_simulation(args) -> None:
    n, alpha, trials = int(args.simulate[0]), _alpha(args.simulate[1]), int(args.simulate[2])
    result = analysis.simulate_balance(n=n, alpha=alpha, trials=trials, seed=args.seed)
    exact = analysis.balance_probability(
        analysis.gc_count_distribution(analysis.symbol_gc_distribution(), n), alpha
    )
    print(f"📊 Simulated p(alpha={float(alpha):g}, n={n}): {result.frequency:.4f} ± {result.standard_error:.4f}")
    print(f"📊 Closed form: {float(exact):.4f}")


def cmd_analyze(args) -> None:
    requested = False
    if args.min_alpha:
        _print_min_alpha(args)
        requested = True
    if args.density is not None:
        _print_density(args.density)
        requested = True
    if args.bit_error:
        _print_bit_error()
        requested = True
    if args.gc_dist is not None:
        _print_gc_dist(args.gc_dist)
        requested = True
    if args.alpha_grid:
        _print_alpha_grid()
        requested = True
    if args.simulate:
        _print_simulation(args)
        requested = True
    if not requested:
        _fail("Nothing to analyze, pass at least one analysis flag", EXIT_USAGE)


def cmd_table(args) -> None:
    canonical = mapping.build_canonical_table()
    if args.emit:
        print(canonical.dump())
        return
    subs = (
        mapping.SubstitutionMatrix.load(args.substitutions)
        if args.substitutions
        else mapping.SubstitutionMatrix.builtin()
    )
    differences = mapping.diff_tables(canonical, mapping.build_greedy_table(subs))
    if not differences:
        print("✅ Greedy table matches the canonical table")
        return
    print(utils.format_table(("symbol", "canonical", "greedy"), differences))
    print(f"⁉️ {len(differences)} of {canonical.size} symbols differ from the canonical table")


def cmd_corpus(args) -> None:
    _confirm_overwrite([args.output], args.force)
    if args.kind == "poem":
        data = corpus.load_poem()
    else:
        data = corpus.generate_image(args.width, args.height, args.seed)
    utils.atomic_write(args.output, data)
    print(f"✅ Wrote {utils.get_bold_text(args.output)} ({len(data)} bytes)")


COMMANDS = {
    "encode": cmd_encode,
    "decode": cmd_decode,
    "analyze": cmd_analyze,
    "table": cmd_table,
    "corpus": cmd_corpus,
}


def run(argv=None):
    load_dotenv(os.path.join(os.getcwd(), ".env"))
    try:
        parser = build_parser()
    except DomainError as error:
        _fail(str(error), EXIT_USAGE)

    args = parser.parse_args(argv)
    if args.verbose:
        logging.basicConfig(level=logging.DEBUG, format="%(levelname)s %(name)s: %(message)s")

    try:
        COMMANDS[args.command](args)
    except EncodingFailedError as error:
        _fail(f"Encoding failed: {error}", EXIT_ENCODING_FAILED)
    except MissingSidecarError as error:
        _fail(str(error), EXIT_USAGE)
    except DecodeError as error:
        _fail(f"Decoding failed: {error}", EXIT_DECODE_FAILED)
    except (ValueError, InfeasibleError, OSError) as error:
        _fail(str(error), EXIT_USAGE)
