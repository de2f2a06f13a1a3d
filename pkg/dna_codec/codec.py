from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from dna_codec.constants import (BASES, DEFAULT_LENGTH, DEFAULT_MAX_ITERATIONS,
                                 R_PREFIX_NT, GcScope, MappingMethod)
from dna_codec.exceptions import (CorruptArchiveError, DecodeError,
                                  DomainError, EncodingFailedError)
from dna_codec.huffman import Codebook, build_codebook, compress, decompress
from dna_codec.mapper import Mapper
from dna_codec.mapping import MappingTable, build_canonical_table, identity_table
from dna_codec.randomizer import Randomizer, randomize
from dna_codec.sequence import (ConstraintSet, DnaSequence, Verdict,
                                max_run_length, verify)
from dna_codec.utils import check_bits

logger = logging.getLogger(__name__)

MAX_PREFIX_ITERATIONS = 4 ** R_PREFIX_NT


def prefix_for(r: int) -> str:
    """Quaternary prefix nucleotide for attempt r: 0→A, 1→C, 2→G, 3→T."""
    if not 0 <= r < MAX_PREFIX_ITERATIONS:
        raise DomainError(f"r={r} does not fit in a {R_PREFIX_NT}-nt prefix")
    return BASES[r]


def r_from_prefix(base: str) -> int:
    index = BASES.find(base.upper()) if len(base) == 1 else -1
    if index < 0:
        raise DecodeError(f"invalid prefix nucleotide {base!r}")
    return index


def default_table(m: int) -> MappingTable:
    """The canonical greedy table for m=3, the lexicographic table otherwise."""
    return build_canonical_table() if m == 3 else identity_table(m)


@dataclass(frozen=True)
class CodecParams:
    """
    Encoder configuration.

    Args:
        method (MappingMethod): M-ary mapping method.
        m (int): Run-length limit, equal to the table tuple length.
        constraints (ConstraintSet): Verification constraints; max_run must equal m.
        n (int): Payload length of a full strand in nt, excluding the r prefix.
        max_iterations (int): Attempts per strand, at most 4 with a 1-nt prefix.
        k (int | None): Huffman symbol width, or None to skip source coding.
        trim_tail (bool): Shorten the final strand to whole mapping units.
    """

    method: MappingMethod = MappingMethod.BLOCK11
    m: int = 3
    constraints: ConstraintSet = field(default_factory=ConstraintSet.default)
    n: int = DEFAULT_LENGTH
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    k: Optional[int] = None
    trim_tail: bool = True

    def __post_init__(self):
        object.__setattr__(self, "method", MappingMethod(self.method))
        if self.m < 2:
            raise DomainError(f"m must be at least 2, got {self.m}")
        if self.constraints.max_run != self.m:
            raise DomainError(
                f"constraint max_run={self.constraints.max_run} differs from m={self.m}"
            )
        if self.n <= 0:
            raise DomainError(f"n must be positive, got {self.n}")
        if self.method is MappingMethod.BLOCK11:
            if self.m != 3:
                raise DomainError("block11 requires m=3")
            if self.n % 6:
                raise DomainError(f"block11 requires n divisible by 6, got {self.n}")
        elif self.n % self.m:
            raise DomainError(f"whole_stream requires n divisible by m={self.m}, got {self.n}")
        if not 1 <= self.max_iterations <= MAX_PREFIX_ITERATIONS:
            raise DomainError(
                f"max_iterations must lie in [1, {MAX_PREFIX_ITERATIONS}], got {self.max_iterations}"
            )
        if self.k is not None and not 1 <= self.k <= 32:
            raise DomainError(f"symbol width k must lie in [1, 32], got {self.k}")


@dataclass(frozen=True)
class ArchiveHeader:
    method: MappingMethod
    m: int
    alpha: Fraction
    n: int
    max_iterations: int
    k: Optional[int]
    original_bit_length: int
    compressed_bit_length: int
    codebook: Optional[Codebook] = None
    gc_scope: GcScope = GcScope.PAYLOAD_ONLY
    forbidden_patterns: tuple = ()

    @classmethod
    def from_params(
        cls,
        params: CodecParams,
        original_bit_length: int,
        compressed_bit_length: int,
        codebook: Optional[Codebook],
    ) -> "ArchiveHeader":
        return cls(
            method=params.method,
            m=params.m,
            alpha=params.constraints.alpha,
            n=params.n,
            max_iterations=params.max_iterations,
            k=params.k,
            original_bit_length=original_bit_length,
            compressed_bit_length=compressed_bit_length,
            codebook=codebook,
            gc_scope=params.constraints.gc_scope,
            forbidden_patterns=tuple(str(p) for p in params.constraints.forbidden_patterns),
        )

    def constraints(self) -> ConstraintSet:
        return ConstraintSet(
            max_run=self.m,
            alpha=self.alpha,
            forbidden_patterns=self.forbidden_patterns,
            gc_scope=self.gc_scope,
        )

    def params(self) -> CodecParams:
        return CodecParams(
            method=self.method,
            m=self.m,
            constraints=self.constraints(),
            n=self.n,
            max_iterations=self.max_iterations,
            k=self.k,
        )


@dataclass(frozen=True)
class EncodedArchive:
    header: ArchiveHeader
    strands: tuple

    @property
    def r_values(self) -> list[int]:
        return [r_from_prefix(strand.bases[0]) for strand in self.strands]

    @property
    def total_nt(self) -> int:
        return sum(len(strand) for strand in self.strands)

    @property
    def density(self) -> float:
        """Original bits per synthesized nucleotide, prefixes included."""
        return self.header.original_bit_length / self.total_nt

    def verify_all(self) -> list[tuple[int, Verdict]]:
        """Returns (index, verdict) for every strand that fails its constraints."""
        constraints = self.header.constraints()
        failures = []
        for index, strand in enumerate(self.strands):
            verdict = verify(strand, (R_PREFIX_NT, len(strand)), constraints)
            if not verdict:
                failures.append((index, verdict))
        return failures


@dataclass
class EncodeLog:
    """Iteration index (1-based) at which each strand passed, in strand order."""

    iterations: list = field(default_factory=list)
    padded_tails: list = field(default_factory=list)

    def record(self, iteration: int) -> None:
        self.iterations.append(iteration)


def encode_chunk(
    bits: str,
    mapper: Mapper,
    payload_nt: int,
    constraints: ConstraintSet,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    rng: Optional[Randomizer] = None,
) -> Optional[tuple[DnaSequence, int]]:
    """
    Runs the randomize-map-verify loop on one chunk.

    Args:
        bits (str): Exactly mapper.capacity_bits(payload_nt) bits.
        mapper (Mapper): Mapping method and table.
        payload_nt (int): Payload length in nt.
        constraints (ConstraintSet): Constraints every emitted strand satisfies.
        max_iterations (int): Number of r values to try, starting at 0.
        rng (Randomizer): Keystream source.

    Returns:
        tuple[DnaSequence, int] | None: The strand and its r, or None when
        every attempt failed verification.
    """
    rng = rng or Randomizer()
    for r in range(max_iterations):
        strand = prefix_for(r) + mapper.map(randomize(bits, r, rng), payload_nt)
        verdict = verify(strand, (R_PREFIX_NT, len(strand)), constraints)
        if verdict:
            return DnaSequence(strand), r
        logger.debug("r=%d rejected: %s", r, ", ".join(str(v) for v in verdict.violations))
    return None


def _encode_strand(
    index: int,
    chunk: str,
    mapper: Mapper,
    params: CodecParams,
    rng: Randomizer,
    log: EncodeLog,
) -> DnaSequence:
    full_nt = params.n
    payload_lengths = [full_nt]
    if params.trim_tail and len(chunk) < mapper.capacity_bits(full_nt):
        short_nt = mapper.payload_nt_for(len(chunk))
        if short_nt < full_nt:
            payload_lengths.insert(0, short_nt)

    for payload_nt in payload_lengths:
        padded = chunk.ljust(mapper.capacity_bits(payload_nt), "0")
        result = encode_chunk(
            padded, mapper, payload_nt, params.constraints, params.max_iterations, rng
        )
        if result is not None:
            strand, r = result
            log.record(r + 1)
            if payload_nt != payload_lengths[0]:
                log.padded_tails.append(index)
            return strand
        if payload_nt != full_nt:
            logger.debug("chunk %d: %d nt tail failed, padding to %d nt", index, payload_nt, full_nt)

    raise EncodingFailedError(index, params.max_iterations)


def encode(
    data: str,
    params: CodecParams,
    table: Optional[MappingTable] = None,
    rng: Optional[Randomizer] = None,
    log: Optional[EncodeLog] = None,
) -> EncodedArchive:
    """
    Encodes a bitstring into constraint-satisfying strands.

    The data is optionally Huffman coded, split into chunks of one strand's
    capacity and each chunk is randomized with r = 0, 1, ... until its
    strand passes verification. The final chunk is zero-padded and the true
    lengths are kept in the header.

    Raises:
        DomainError: If data is empty, not a bitstring, or the table does
            not match params.m.
        EncodingFailedError: If a chunk exhausts params.max_iterations.
    """
    check_bits(data)
    if not data:
        raise DomainError("cannot encode empty data")
    table = table or default_table(params.m)
    if table.m != params.m:
        raise DomainError(f"table is for m={table.m}, params ask for m={params.m}")
    rng = rng or Randomizer()
    log = log if log is not None else EncodeLog()

    codebook = None
    payload = data
    if params.k is not None:
        codebook = build_codebook(data, params.k)
        payload = compress(data, codebook)
        logger.info("source coding: %d bits -> %d bits", len(data), len(payload))

    mapper = Mapper.create_mapper(params.method, table)
    chunk_bits = mapper.capacity_bits(params.n)
    strands = tuple(
        _encode_strand(index, payload[start:start + chunk_bits], mapper, params, rng, log)
        for index, start in enumerate(range(0, len(payload), chunk_bits))
    )

    header = ArchiveHeader.from_params(params, len(data), len(payload), codebook)
    archive = EncodedArchive(header, strands)
    logger.info(
        "encoded %d bits into %d strands, %d nt", len(data), len(strands), archive.total_nt
    )
    return archive


def _check_header(header: ArchiveHeader, strand_count: int, chunk_bits: int) -> None:
    if header.codebook is None and header.original_bit_length != header.compressed_bit_length:
        raise CorruptArchiveError(
            f"original length {header.original_bit_length} differs from stored length "
            f"{header.compressed_bit_length} without source coding"
        )
    if header.codebook is not None and header.codebook.k != header.k:
        raise CorruptArchiveError(f"codebook k={header.codebook.k} differs from header k={header.k}")
    expected = -(-header.compressed_bit_length // chunk_bits)
    if header.compressed_bit_length <= 0 or expected != strand_count:
        raise CorruptArchiveError(
            f"{header.compressed_bit_length} stored bits need {expected} strands, archive has {strand_count}"
        )


def decode(
    archive: EncodedArchive,
    table: Optional[MappingTable] = None,
    rng: Optional[Randomizer] = None,
) -> str:
    """
    Restores the original bitstring from an archive.

    Raises:
        DecodeError: If a strand has an invalid prefix or tuple; the error
            carries the strand index.
        CorruptArchiveError: If the header disagrees with the strands.
    """
    header = archive.header
    try:
        params = header.params()
    except DomainError as error:
        raise CorruptArchiveError(f"invalid header: {error}") from error
    table = table or default_table(params.m)
    rng = rng or Randomizer()
    mapper = Mapper.create_mapper(params.method, table)
    full_nt = params.n
    chunk_bits = mapper.capacity_bits(full_nt)
    _check_header(header, len(archive.strands), chunk_bits)

    chunks = []
    last = len(archive.strands) - 1
    for index, strand in enumerate(archive.strands):
        text = str(strand)
        payload = text[R_PREFIX_NT:]
        try:
            if len(payload) != full_nt and (index != last or len(payload) > full_nt):
                raise CorruptArchiveError(f"payload of {len(payload)} nt, expected {full_nt}")
            r = r_from_prefix(text[:R_PREFIX_NT])
            if r >= params.max_iterations:
                raise DecodeError(f"prefix r={r} exceeds {params.max_iterations} iterations")
            try:
                bits = mapper.unmap(payload)
            except DomainError as error:
                raise CorruptArchiveError(str(error)) from error
        except DecodeError as error:
            raise error.at_strand(index)
        chunks.append(randomize(bits, r, rng))

    stored = "".join(chunks)
    if len(stored) < header.compressed_bit_length:
        raise CorruptArchiveError(
            f"strands carry {len(stored)} bits, header declares {header.compressed_bit_length}"
        )
    stored = stored[:header.compressed_bit_length]
    if header.codebook is None:
        data = stored
    else:
        data = decompress(stored, header.codebook, header.original_bit_length)
    logger.info("decoded %d strands into %d bits", len(archive.strands), len(data))
    return data


def run_prefix_safety_check(table: MappingTable, m: int) -> bool:
    """True iff no prefix nucleotide followed by any table tuple runs longer than m."""
    return all(
        max_run_length(prefix + tuple_) <= m
        for prefix in BASES[:MAX_PREFIX_ITERATIONS]
        for tuple_ in table.tuples
    )
