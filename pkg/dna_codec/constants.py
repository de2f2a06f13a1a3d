from enum import Enum


class Nucleotide(Enum):
    A = 0
    C = 1
    G = 2
    T = 3

    @classmethod
    def from_char(cls, char: str) -> "Nucleotide":
        return cls[char.upper()]

    @property
    def char(self) -> str:
        return self.name


class MappingMethod(Enum):
    WHOLE_STREAM = "whole_stream"
    BLOCK11 = "block11"


class GcScope(Enum):
    PAYLOAD_ONLY = "payload_only"
    FULL_STRAND = "full_strand"


class ConstraintKind(Enum):
    RUN_LENGTH = "run_length"
    GC_RATIO = "gc_ratio"
    FORBIDDEN_PATTERN = "forbidden_pattern"


class ArchiveFormat(Enum):
    FASTA = "fasta"
    CONTAINER = "container"


BASES = "ACGT"
GC_BASES = frozenset("GC")

# Channel capacity for m=3, imported as a constant.
CAPACITY_M3 = 1.9824

# Substitution error percentages measured per ordered base pair.
SUBSTITUTION_PERCENTAGES = {
    ("G", "A"): "14.133",
    ("G", "T"): "13.773",
    ("C", "A"): "8.894",
    ("C", "T"): "7.842",
    ("T", "C"): "7.142",
    ("A", "G"): "7.067",
    ("T", "A"): "7.050",
    ("A", "T"): "7.046",
    ("T", "G"): "6.948",
    ("G", "C"): "6.889",
    ("A", "C"): "6.826",
    ("C", "G"): "6.387",
}

# Per-pair average bit error of the canonical table under SUBSTITUTION_PERCENTAGES.
CANONICAL_PAIR_BIT_ERROR = {
    ("G", "A"): 2.0,
    ("G", "T"): 2.357,
    ("C", "A"): 2.214,
    ("C", "T"): 2.357,
    ("T", "C"): 2.357,
    ("A", "G"): 2.0,
    ("T", "A"): 2.5,
    ("A", "T"): 2.5,
    ("T", "G"): 2.357,
    ("G", "C"): 2.857,
    ("A", "C"): 2.214,
    ("C", "G"): 2.857,
}

# 48-ary Gray ordering: adjacent entries differ in exactly one of six bits.
GRAY_SEQUENCE_48 = (
    0, 1, 3, 2, 6, 7, 5, 4,
    12, 13, 15, 14, 10, 11, 9, 25,
    27, 26, 30, 31, 29, 28, 20, 21,
    23, 22, 18, 19, 17, 16, 24, 8,
    40, 42, 43, 41, 45, 47, 46, 44,
    36, 37, 39, 38, 34, 35, 33, 32,
)

# Canonical 48-ary table for m=3, indexed by symbol.
CANONICAL_TABLE_48 = (
    "AAC", "AAT", "TAT", "GAT", "AGC", "AGT", "TGT", "CGT",
    "GAG", "ACT", "ACA", "ACG", "ATC", "ATA", "GCA", "GTA",
    "TAG", "TCG", "TTA", "TCA", "CAC", "TAC", "TTC", "TGC",
    "AAG", "GCT", "CCT", "TCT", "CAT", "CAG", "CCA", "CCG",
    "GCG", "GGT", "GAC", "GGC", "TGA", "CGC", "GTC", "CTC",
    "GTG", "CTG", "ATG", "TTG", "GGA", "CTA", "AGA", "CGA",
)

CANONICAL_CHAIN_START = "AAC"

BLOCK_BITS = 11
BLOCK_NT = 6
BLOCK_VALUES = 1 << BLOCK_BITS

RANDOMIZER_HASH = "sha3_512"
R_PREFIX_NT = 1

DEFAULT_MAX_RUN = 3
DEFAULT_ALPHA = "0.05"
DEFAULT_LENGTH = 198
DEFAULT_MAX_ITERATIONS = 4
DEFAULT_SYMBOL_BITS = 16

ARCHIVE_MAGIC = b"DNAGCRLL"
ARCHIVE_VERSION = 1
SIDECAR_SUFFIX = ".meta"
FASTA_LINE_WIDTH = 80
