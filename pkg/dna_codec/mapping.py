from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from dna_codec.constants import (BASES, CANONICAL_CHAIN_START,
                                 CANONICAL_TABLE_48, GRAY_SEQUENCE_48,
                                 SUBSTITUTION_PERCENTAGES)
from dna_codec.exceptions import DecodeError, DomainError


def alphabet_size(m: int) -> int:
    return 3 * 4 ** (m - 1)


def digits_to_tuple(digits) -> str:
    return "".join(BASES[d] for d in digits)


def tuple_to_digits(tuple_: str) -> tuple[int, ...]:
    return tuple(BASES.index(c) for c in tuple_)


@dataclass(frozen=True)
class SubstitutionMatrix:
    """
    Probabilities of the 12 ordered base-to-base substitution events,
    normalized to sum to one.
    """

    probabilities: dict = field(default_factory=dict)

    def __post_init__(self):
        probs = {}
        for (src, dst), value in self.probabilities.items():
            src, dst = src.upper(), dst.upper()
            if src == dst or src not in BASES or dst not in BASES:
                raise DomainError(f"Invalid substitution pair {src}->{dst}")
            value = Fraction(value)
            if value <= 0:
                raise DomainError(f"Substitution probability for {src}->{dst} must be positive")
            probs[(src, dst)] = value
        if len(probs) != 12:
            raise DomainError(f"Expected 12 substitution pairs, got {len(probs)}")
        total = sum(probs.values())
        object.__setattr__(
            self, "probabilities", {pair: value / total for pair, value in probs.items()}
        )

    @classmethod
    def builtin(cls) -> "SubstitutionMatrix":
        return cls({pair: Fraction(value) for pair, value in SUBSTITUTION_PERCENTAGES.items()})

    @classmethod
    def load(cls, path: "str | Path") -> "SubstitutionMatrix":
        """
        Reads a delimited `from,to,probability` file. Blank lines and lines
        starting with '#' are skipped.
        """
        probs = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            src, dst, value = (part.strip() for part in line.split(","))
            probs[(src, dst)] = Fraction(value)
        return cls(probs)

    def dump(self) -> str:
        ordered = sorted(self.probabilities.items(), key=lambda item: (-item[1], item[0]))
        return "\n".join(f"{src},{dst},{float(p):.6f}" for (src, dst), p in ordered)

    def prob(self, src: str, dst: str) -> Fraction:
        return self.probabilities[(src, dst)]


@dataclass(frozen=True)
class GraySequence:
    codes: tuple

    def __post_init__(self):
        codes = tuple(self.codes)
        size = len(codes)
        if sorted(codes) != list(range(size)):
            raise DomainError("Gray sequence must be a permutation of 0..M-1")
        for a, b in zip(codes, codes[1:]):
            if bin(a ^ b).count("1") != 1:
                raise DomainError(f"Gray neighbours {a} and {b} differ in more than one bit")
        object.__setattr__(self, "codes", codes)

    def __len__(self):
        return len(self.codes)

    def __getitem__(self, index: int) -> int:
        return self.codes[index]

    def __iter__(self):
        return iter(self.codes)


def gray_sequence_48() -> GraySequence:
    return GraySequence(GRAY_SEQUENCE_48)


@dataclass(frozen=True)
class MappingTable:
    """
    Bijection between M-ary symbols and m-nt tuples. `tuples[s]` is the
    tuple for symbol s.
    """

    m: int
    tuples: tuple

    def __post_init__(self):
        tuples = tuple(t.upper() for t in self.tuples)
        if len(tuples) != alphabet_size(self.m):
            raise DomainError(
                f"A table for m={self.m} needs {alphabet_size(self.m)} entries, got {len(tuples)}"
            )
        if any(len(t) != self.m or not set(t) <= set(BASES) for t in tuples):
            raise DomainError(f"Every tuple must be {self.m} nucleotides long")
        if len(set(tuples)) != len(tuples):
            raise DomainError("Mapping table tuples must be distinct")
        object.__setattr__(self, "tuples", tuples)
        object.__setattr__(self, "_index", {t: s for s, t in enumerate(tuples)})

    @classmethod
    def from_tuples(cls, m: int, tuples) -> "MappingTable":
        table = cls(m, tuple(tuples))
        for t in table.tuples:
            if m >= 2 and t[m - 2] == t[m - 1]:
                raise DomainError(f"Tuple {t} repeats its last two bases")
        return table

    @classmethod
    def load(cls, path: "str | Path", m: int = 3) -> "MappingTable":
        entries = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if line.strip():
                symbol, tuple_ = line.strip().split(",")
                entries[int(symbol)] = tuple_
        return cls.from_tuples(m, (entries[s] for s in range(len(entries))))

    @property
    def size(self) -> int:
        return len(self.tuples)

    def dump(self) -> str:
        return "\n".join(f"{s},{t}" for s, t in enumerate(self.tuples))

    def symbol_of(self, tuple_: str) -> "int | None":
        return self._index.get(tuple_)


def enumerate_valid_tuples(m: int, i: int) -> list[str]:
    """
    Returns every m-tuple whose i-th and (i+1)-th bases differ (1-based),
    in lexicographic order.
    """
    if m < 2 or not 1 <= i < m:
        raise DomainError(f"constraint index i={i} must satisfy 1 <= i < m={m}")
    return [
        digits_to_tuple(digits)
        for digits in itertools.product(range(4), repeat=m)
        if digits[i - 1] != digits[i]
    ]


def identity_table(m: int) -> MappingTable:
    return MappingTable.from_tuples(m, enumerate_valid_tuples(m, m - 1))


def _substitution_score(subs: SubstitutionMatrix, src: str, dst: str) -> "tuple[Fraction, int]":
    score = Fraction(1)
    positions = [i for i, (a, b) in enumerate(zip(src, dst)) if a != b]
    for i in positions:
        score *= subs.prob(src[i], dst[i])
    return score, positions[0]


def greedy_tuple_chain(
    subs: SubstitutionMatrix, start: str = CANONICAL_CHAIN_START, m: int = 3
) -> list[str]:
    """
    Orders the valid tuples so each one is the most likely substitution
    outcome of its predecessor.

    Candidates at the smallest Hamming distance from the current tuple are
    scored by the product of their substitution probabilities. Ties go to
    the candidate whose first changed position is earliest, then to the
    lexicographically smaller tuple.
    """
    candidates = enumerate_valid_tuples(m, m - 1)
    start = start.upper()
    if start not in candidates:
        raise DomainError(f"start tuple {start} is not a valid tuple for m={m}")

    chain = [start]
    unvisited = set(candidates) - {start}
    current = start
    while unvisited:
        by_distance = defaultdict(list)
        for candidate in unvisited:
            distance = sum(a != b for a, b in zip(current, candidate))
            by_distance[distance].append(candidate)
        nearest = by_distance[min(by_distance)]

        def rank(candidate):
            score, first_position = _substitution_score(subs, current, candidate)
            return -score, first_position, candidate

        current = min(nearest, key=rank)
        chain.append(current)
        unvisited.remove(current)
    return chain


def table_from_chain(chain, gray: GraySequence, m: int = 3) -> MappingTable:
    tuples = [None] * len(chain)
    for position, tuple_ in enumerate(chain):
        tuples[gray[position]] = tuple_
    return MappingTable.from_tuples(m, tuples)


def build_canonical_table() -> MappingTable:
    return MappingTable.from_tuples(3, CANONICAL_TABLE_48)


def build_greedy_table(subs: "SubstitutionMatrix | None" = None) -> MappingTable:
    subs = subs or SubstitutionMatrix.builtin()
    return table_from_chain(greedy_tuple_chain(subs), gray_sequence_48())


def diff_tables(reference: MappingTable, other: MappingTable) -> list[tuple[int, str, str]]:
    return [
        (symbol, a, b)
        for symbol, (a, b) in enumerate(zip(reference.tuples, other.tuples))
        if a != b
    ]


def encode_symbol(table: MappingTable, s: int) -> str:
    if not 0 <= s < table.size:
        raise DomainError(f"symbol {s} outside [0, {table.size})")
    return table.tuples[s]


def decode_symbol(table: MappingTable, t: str) -> int:
    symbol = table.symbol_of(str(t).upper())
    if symbol is None:
        raise DecodeError(f"tuple {t} is not in the mapping table", tuple_=str(t))
    return symbol


@dataclass(frozen=True)
class BitErrorReport:
    overall: Fraction
    per_pair: dict
    event_counts: dict

    def pair(self, src: str, dst: str) -> Fraction:
        return self.per_pair[(src, dst)]


def average_bit_error(table: MappingTable, subs: SubstitutionMatrix) -> BitErrorReport:
    """
    Enumerates every single-nt substitution that turns a table tuple into
    another table tuple and measures the Hamming distance between the two
    symbols.

    The per-pair value is the mean over that pair's events. The overall
    value weights each pair's mean by its substitution probability,
    renormalized over the pairs that have at least one event.
    """
    totals = defaultdict(int)
    counts = defaultdict(int)
    for symbol, tuple_ in enumerate(table.tuples):
        for position, src in enumerate(tuple_):
            for dst in BASES:
                if dst == src:
                    continue
                mutated = tuple_[:position] + dst + tuple_[position + 1:]
                other = table.symbol_of(mutated)
                if other is None:
                    continue
                totals[(src, dst)] += bin(symbol ^ other).count("1")
                counts[(src, dst)] += 1

    per_pair = {pair: Fraction(totals[pair], counts[pair]) for pair in counts}
    weight = sum(subs.prob(*pair) for pair in per_pair)
    overall = sum(subs.prob(*pair) * mean for pair, mean in per_pair.items()) / weight
    return BitErrorReport(overall, per_pair, dict(counts))


def random_table_average_bit_error(alphabet: int = 48) -> Fraction:
    """Mean Hamming distance between two distinct symbols of the alphabet."""
    total = sum(
        bin(a ^ b).count("1")
        for a in range(alphabet)
        for b in range(alphabet)
        if a != b
    )
    return Fraction(total, alphabet * (alphabet - 1))
