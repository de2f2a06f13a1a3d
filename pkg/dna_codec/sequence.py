from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Union

from dna_codec.constants import (BASES, DEFAULT_ALPHA, DEFAULT_MAX_RUN,
                                 GC_BASES, ConstraintKind, GcScope,
                                 Nucleotide)
from dna_codec.exceptions import DomainError

_VALID_BASES = frozenset(BASES)


@dataclass(frozen=True)
class DnaSequence:
    """
    Immutable nucleotide string. Parsing is case-insensitive, the stored
    and printed form is uppercase.
    """

    bases: str = ""

    def __post_init__(self):
        normalized = self.bases.upper()
        if not _VALID_BASES.issuperset(normalized):
            bad = sorted(set(normalized) - _VALID_BASES)
            raise DomainError(f"Invalid nucleotide characters: {''.join(bad)}")
        object.__setattr__(self, "bases", normalized)

    @classmethod
    def parse(cls, text: str) -> "DnaSequence":
        return cls("".join(text.split()))

    @classmethod
    def from_nucleotides(cls, nucleotides) -> "DnaSequence":
        return cls("".join(n.char for n in nucleotides))

    @property
    def nucleotides(self) -> tuple[Nucleotide, ...]:
        return tuple(Nucleotide.from_char(c) for c in self.bases)

    def __len__(self) -> int:
        return len(self.bases)

    def __iter__(self) -> Iterator[Nucleotide]:
        return iter(self.nucleotides)

    def __getitem__(self, item) -> "DnaSequence":
        return DnaSequence(self.bases[item])

    def __add__(self, other: "DnaSequence | str") -> "DnaSequence":
        return DnaSequence(self.bases + str(other))

    def __str__(self) -> str:
        return self.bases


SequenceLike = Union[DnaSequence, str]


def _text(seq: SequenceLike) -> str:
    return seq.bases if isinstance(seq, DnaSequence) else seq.upper()


def gc_count(seq: SequenceLike) -> int:
    text = _text(seq)
    return sum(text.count(base) for base in GC_BASES)


def gc_ratio(seq: SequenceLike) -> Fraction:
    """
    Returns the fraction of G or C bases as an exact rational.

    Raises:
        DomainError: If the sequence is empty.
    """
    text = _text(seq)
    if not text:
        raise DomainError("GC ratio of an empty sequence is undefined")
    return Fraction(gc_count(text), len(text))


def max_run_length(seq: SequenceLike) -> int:
    text = _text(seq)
    return max((len(list(run)) for _, run in itertools.groupby(text)), default=0)


def contains_pattern(seq: SequenceLike, pattern: SequenceLike) -> bool:
    needle = _text(pattern)
    if not needle:
        raise DomainError("Forbidden pattern must not be empty")
    return needle in _text(seq)


@dataclass(frozen=True)
class ConstraintSet:
    """
    Verification constraints for a strand.

    Args:
        max_run (int): Longest allowed homopolymer run, checked over the full strand.
        alpha (Fraction): Allowed deviation of the GC ratio from one half.
        forbidden_patterns (tuple[DnaSequence, ...]): Substrings that must not occur.
        gc_scope (GcScope): Region the GC ratio is measured over.
    """

    max_run: int = DEFAULT_MAX_RUN
    alpha: Fraction = Fraction(DEFAULT_ALPHA)
    forbidden_patterns: tuple = ()
    gc_scope: GcScope = GcScope.PAYLOAD_ONLY

    def __post_init__(self):
        if self.max_run < 1:
            raise DomainError(f"max_run must be at least 1, got {self.max_run}")
        alpha = Fraction(str(self.alpha)) if isinstance(self.alpha, float) else Fraction(self.alpha)
        if not 0 <= alpha <= Fraction(1, 2):
            raise DomainError(f"alpha must lie in [0, 0.5], got {alpha}")
        object.__setattr__(self, "alpha", alpha)
        patterns = tuple(
            p if isinstance(p, DnaSequence) else DnaSequence.parse(p)
            for p in self.forbidden_patterns
        )
        if any(len(p) == 0 for p in patterns):
            raise DomainError("Forbidden patterns must be non-empty")
        object.__setattr__(self, "forbidden_patterns", patterns)
        object.__setattr__(self, "gc_scope", GcScope(self.gc_scope))

    @classmethod
    def default(cls) -> "ConstraintSet":
        return cls()

    @property
    def gc_window(self) -> tuple[Fraction, Fraction]:
        half = Fraction(1, 2)
        return half - self.alpha, half + self.alpha


@dataclass(frozen=True)
class Violation:
    kind: ConstraintKind
    measurement: object

    def __str__(self):
        if self.kind is ConstraintKind.GC_RATIO:
            return f"{self.kind.value}={float(self.measurement):.4f}"
        return f"{self.kind.value}={self.measurement}"


@dataclass(frozen=True)
class Verdict:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.passed


def verify(
    strand: SequenceLike,
    payload_range: tuple[int, int],
    constraints: ConstraintSet,
) -> Verdict:
    """
    Checks a strand against every constraint and reports all violations.

    Run length and forbidden patterns are always measured on the full
    strand; the GC ratio on the payload region or the full strand,
    depending on the constraint set's gc_scope.

    Raises:
        DomainError: If payload_range does not lie within the strand, or
            the region the GC ratio is measured over is empty.
    """
    text = _text(strand)
    start, stop = payload_range
    if not 0 <= start <= stop <= len(text):
        raise DomainError(f"payload range {payload_range} outside strand of length {len(text)}")

    violations = []
    run = max_run_length(text)
    if run > constraints.max_run:
        violations.append(Violation(ConstraintKind.RUN_LENGTH, run))

    region = text[start:stop] if constraints.gc_scope is GcScope.PAYLOAD_ONLY else text
    if not region:
        raise DomainError(f"no nucleotides to measure GC content over in range {payload_range}")
    ratio = gc_ratio(region)
    low, high = constraints.gc_window
    if not low <= ratio <= high:
        violations.append(Violation(ConstraintKind.GC_RATIO, ratio))

    for pattern in constraints.forbidden_patterns:
        if pattern.bases in text:
            violations.append(Violation(ConstraintKind.FORBIDDEN_PATTERN, pattern.bases))

    return Verdict(tuple(violations))
