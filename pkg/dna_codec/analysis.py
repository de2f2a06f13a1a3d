from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from dna_codec.codec import CodecParams, EncodeLog, default_table, encode_chunk
from dna_codec.constants import (BLOCK_BITS, BLOCK_NT, BLOCK_VALUES,
                                 CAPACITY_M3, GC_BASES)
from dna_codec.exceptions import DomainError, InfeasibleError
from dna_codec.mapper import Mapper, map_block11
from dna_codec.mapping import (MappingTable, SubstitutionMatrix, alphabet_size,
                               average_bit_error, build_canonical_table,
                               random_table_average_bit_error)
from dna_codec.randomizer import Randomizer
from dna_codec.utils import int_to_bits

ALPHA_GRID_LENGTHS = (100, 150, 200, 250, 300)
ALPHA_GRID_ITERATIONS = (4, 8)
ALPHA_GRID_STEP = Fraction(1, 1000)


def info_density(m: int) -> float:
    """Bits per nt of the M-ary mapping, log2(3 * 4^(m-1)) / m."""
    if m < 1:
        raise DomainError(f"m must be at least 1, got {m}")
    return math.log2(alphabet_size(m)) / m


def coding_efficiency(m: int, capacity: float = CAPACITY_M3) -> float:
    if capacity <= 0:
        raise DomainError(f"capacity must be positive, got {capacity}")
    return info_density(m) / capacity


@dataclass(frozen=True)
class SymbolGcDistribution:
    """
    GC-count histogram of the 6-nt images of all 2048 block values.

    `prefix_counts[j][l]` counts the images whose first j nucleotides hold
    exactly l G/C bases; `prefix_counts[6]` is the full-block histogram.
    """

    prefix_counts: tuple
    total: int = BLOCK_VALUES

    @property
    def counts(self) -> tuple:
        return self.prefix_counts[BLOCK_NT]

    @property
    def p(self) -> tuple:
        return tuple(Fraction(c, self.total) for c in self.counts)


def symbol_gc_distribution(table: Optional[MappingTable] = None) -> SymbolGcDistribution:
    table = table or build_canonical_table()
    prefix_counts = [[0] * (j + 1) for j in range(BLOCK_NT + 1)]
    for value in range(BLOCK_VALUES):
        image = map_block11(int_to_bits(value, BLOCK_BITS), table).bases
        running = 0
        prefix_counts[0][0] += 1
        for j, base in enumerate(image, start=1):
            running += base in GC_BASES
            prefix_counts[j][running] += 1
    return SymbolGcDistribution(tuple(tuple(c) for c in prefix_counts))


def _convolve(a: list[int], b: "list[int] | tuple") -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


@dataclass(frozen=True)
class GcCountDistribution:
    """
    Probability a[j] of exactly j G/C bases in an n-nt payload, stored as
    integer numerators over a common denominator.
    """

    n: int
    numerators: tuple
    denominator: int

    @property
    def a(self) -> tuple:
        return tuple(Fraction(x, self.denominator) for x in self.numerators)

    def __getitem__(self, j: int) -> Fraction:
        return Fraction(self.numerators[j], self.denominator)

    def __len__(self) -> int:
        return len(self.numerators)


def gc_count_distribution(
    p: SymbolGcDistribution, n: int, allow_partial_block: bool = False
) -> GcCountDistribution:
    """
    Raises the block polynomial to the n/6-th power by exact convolution.

    With allow_partial_block, n need not be a multiple of 6: the last
    n mod 6 positions come from the first positions of one more block.
    """
    blocks, rest = divmod(n, BLOCK_NT)
    if n < 1 or (not allow_partial_block and (rest or blocks < 1)):
        raise DomainError(f"n={n} must be a positive multiple of {BLOCK_NT}")

    numerators = [1]
    for _ in range(blocks):
        numerators = _convolve(numerators, p.counts)
    factors = blocks
    if rest:
        numerators = _convolve(numerators, p.prefix_counts[rest])
        factors += 1
    return GcCountDistribution(n, tuple(numerators), p.total ** factors)


def _window(alpha: Fraction, n: int) -> tuple[int, int]:
    half = Fraction(1, 2)
    return math.ceil((half - alpha) * n), math.floor((half + alpha) * n)


def balance_probability(a: GcCountDistribution, alpha, n: Optional[int] = None) -> Fraction:
    """Sum of a[j] for (0.5 - alpha) n <= j <= (0.5 + alpha) n."""
    alpha = Fraction(str(alpha)) if isinstance(alpha, float) else Fraction(alpha)
    if not 0 <= alpha <= Fraction(1, 2):
        raise DomainError(f"alpha must lie in [0, 0.5], got {alpha}")
    n = a.n if n is None else n
    if n != a.n:
        raise DomainError(f"distribution is for n={a.n}, not n={n}")
    low, high = _window(alpha, n)
    return Fraction(sum(a.numerators[max(low, 0):high + 1]), a.denominator)


def success_probability(p_bal, iterations: int):
    if not 0 <= p_bal <= 1:
        raise DomainError(f"probability must lie in [0, 1], got {p_bal}")
    if iterations < 1:
        raise DomainError(f"iterations must be positive, got {iterations}")
    return 1 - (1 - p_bal) ** iterations


def min_alpha(
    p: SymbolGcDistribution,
    n: int,
    iterations: int,
    epsilon: float,
    step: Fraction = ALPHA_GRID_STEP,
) -> Fraction:
    """
    Smallest alpha on the step grid whose per-strand balance probability
    reaches 1 - epsilon^(1/I), so that I attempts fail with probability at
    most epsilon. Lengths that are not a multiple of 6 use a partial block.

    Raises:
        InfeasibleError: If no alpha up to 0.5 is sufficient.
    """
    if not 0 < epsilon < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    if iterations < 1:
        raise DomainError(f"iterations must be positive, got {iterations}")
    a = gc_count_distribution(p, n, allow_partial_block=True)
    threshold = 1 - epsilon ** (1 / iterations)
    for index in range(int(Fraction(1, 2) / step) + 1):
        alpha = index * step
        if float(balance_probability(a, alpha, n)) >= threshold:
            return alpha
    raise InfeasibleError(f"no alpha <= 0.5 reaches {threshold:.6f} for n={n}, I={iterations}")


def min_alpha_grid(
    ns: Iterable[int] = ALPHA_GRID_LENGTHS,
    iterations: Iterable[int] = ALPHA_GRID_ITERATIONS,
    epsilon: float = 1e-4,
    table: Optional[MappingTable] = None,
) -> dict:
    """Minimum alpha for every (I, n) pair, keyed as result[I][n]."""
    p = symbol_gc_distribution(table)
    ns = tuple(ns)
    return {i: {n: min_alpha(p, n, i, epsilon) for n in ns} for i in iterations}


@dataclass(frozen=True)
class IterationHistogram:
    """Strands first passing at iteration 1..I, and chunks that never passed."""

    counts: tuple
    failures: int = 0

    @property
    def total(self) -> int:
        return sum(self.counts) + self.failures

    @property
    def success_rate(self) -> float:
        return sum(self.counts) / self.total if self.total else 1.0

    def first_pass_rate(self) -> float:
        return self.counts[0] / self.total if self.total and self.counts else 0.0


def iteration_histogram(log: "EncodeLog | Iterable[Optional[int]]", max_iterations: int = 4) -> IterationHistogram:
    """
    Counts strands by the 1-based iteration at which they passed. Entries
    of None count as failures.
    """
    entries = log.iterations if isinstance(log, EncodeLog) else log
    counts = [0] * max_iterations
    failures = 0
    for iteration in entries:
        if iteration is None:
            failures += 1
        elif 1 <= iteration <= max_iterations:
            counts[iteration - 1] += 1
        else:
            raise DomainError(f"iteration {iteration} outside [1, {max_iterations}]")
    return IterationHistogram(tuple(counts), failures)


@dataclass(frozen=True)
class BalanceSimulation:
    trials: int
    balanced: int

    @property
    def frequency(self) -> float:
        return self.balanced / self.trials

    @property
    def standard_error(self) -> float:
        f = self.frequency
        return math.sqrt(f * (1 - f) / self.trials)


def _block_gc_lookup(table: MappingTable) -> np.ndarray:
    return np.array(
        [
            sum(base in GC_BASES for base in map_block11(int_to_bits(v, BLOCK_BITS), table).bases)
            for v in range(BLOCK_VALUES)
        ],
        dtype=np.int64,
    )


def simulate_balance(
    table: Optional[MappingTable] = None,
    n: int = 198,
    alpha=Fraction(1, 20),
    trials: int = 100_000,
    seed: int = 0,
) -> BalanceSimulation:
    """
    Monte Carlo frequency of balanced block11 payloads built from uniform
    random 11-bit blocks.
    """
    if n % BLOCK_NT or n <= 0:
        raise DomainError(f"n={n} must be a positive multiple of {BLOCK_NT}")
    alpha = Fraction(str(alpha)) if isinstance(alpha, float) else Fraction(alpha)
    lookup = _block_gc_lookup(table or build_canonical_table())
    rng = np.random.default_rng(seed)
    values = rng.integers(0, BLOCK_VALUES, size=(trials, n // BLOCK_NT))
    gc = lookup[values].sum(axis=1)
    low, high = _window(alpha, n)
    balanced = int(np.count_nonzero((gc >= low) & (gc <= high)))
    return BalanceSimulation(trials, balanced)


def simulate_encoding(
    params: Optional[CodecParams] = None,
    trials: int = 100_000,
    seed: int = 0,
    table: Optional[MappingTable] = None,
) -> IterationHistogram:
    """Encodes random full-strand chunks and histograms the passing iteration."""
    params = params or CodecParams()
    mapper = Mapper.create_mapper(params.method, table or default_table(params.m))
    chunk_bits = mapper.capacity_bits(params.n)
    rng = np.random.default_rng(seed)
    randomizer = Randomizer()
    iterations = []
    for _ in range(trials):
        bits = "".join("1" if b else "0" for b in rng.integers(0, 2, size=chunk_bits))
        result = encode_chunk(
            bits, mapper, params.n, params.constraints, params.max_iterations, randomizer
        )
        iterations.append(None if result is None else result[1] + 1)
    return iteration_histogram(iterations, params.max_iterations)


@dataclass(frozen=True)
class BitErrorSummary:
    greedy: Fraction
    random: Fraction
    per_pair: dict = field(default_factory=dict)

    @property
    def reduction(self) -> float:
        return float(1 - self.greedy / self.random)


def bit_error_summary(
    table: Optional[MappingTable] = None, subs: Optional[SubstitutionMatrix] = None
) -> BitErrorSummary:
    table = table or build_canonical_table()
    report = average_bit_error(table, subs or SubstitutionMatrix.builtin())
    return BitErrorSummary(
        report.overall, random_table_average_bit_error(table.size), report.per_pair
    )


@dataclass(frozen=True)
class DensityRow:
    m: int
    alphabet: int
    density: float
    efficiency: float


def density_table(ms: Iterable[int] = (1, 2, 3, 4, 5), capacity: float = CAPACITY_M3) -> list[DensityRow]:
    return [
        DensityRow(m, alphabet_size(m), info_density(m), coding_efficiency(m, capacity))
        for m in ms
    ]
