from __future__ import annotations

import heapq
import itertools
import math
import struct
from collections import Counter
from dataclasses import dataclass, field

from dna_codec.exceptions import CorruptArchiveError, DomainError
from dna_codec.utils import int_to_bits

_HEADER = struct.Struct("<BI")
_ENTRY = struct.Struct("<IB")


def split_symbols(bits: str, k: int) -> list[int]:
    """Splits bits into k-bit symbols, zero-padding the last one."""
    padded = bits + "0" * (-len(bits) % k)
    return [int(padded[i:i + k], 2) for i in range(0, len(padded), k)]


@dataclass(frozen=True)
class Codebook:
    """
    Prefix code over k-bit source symbols, stored as canonical code
    lengths. `codes` is derived: symbols sorted by (length, value) receive
    consecutive codes.
    """

    k: int
    lengths: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 1 <= self.k <= 32:
            raise DomainError(f"symbol width k must lie in [1, 32], got {self.k}")
        if not self.lengths:
            raise DomainError("codebook needs at least one symbol")
        if any(length < 1 for length in self.lengths.values()):
            raise DomainError("code lengths must be positive")
        if self.kraft_sum() > 1:
            raise DomainError("code lengths violate the Kraft inequality")

        codes = {}
        code = 0
        previous = None
        for symbol, length in sorted(self.lengths.items(), key=lambda item: (item[1], item[0])):
            if previous is not None:
                code = (code + 1) << (length - previous)
            previous = length
            codes[symbol] = int_to_bits(code, length)
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "_decode", {c: s for s, c in codes.items()})

    def kraft_sum(self) -> float:
        return sum(2.0 ** -length for length in self.lengths.values())

    def to_bytes(self) -> bytes:
        entries = sorted(self.lengths.items())
        return _HEADER.pack(self.k, len(entries)) + b"".join(
            _ENTRY.pack(symbol, length) for symbol, length in entries
        )

    @classmethod
    def from_bytes(cls, blob: bytes) -> "Codebook":
        try:
            k, count = _HEADER.unpack_from(blob, 0)
            lengths = dict(
                _ENTRY.unpack_from(blob, _HEADER.size + i * _ENTRY.size) for i in range(count)
            )
        except struct.error as error:
            raise CorruptArchiveError(f"truncated codebook: {error}") from error
        if _HEADER.size + count * _ENTRY.size != len(blob):
            raise CorruptArchiveError("codebook blob has trailing bytes")
        return cls(k, lengths)

    def dump(self) -> str:
        width = -(-self.k // 4)
        return "\n".join(
            f"{symbol:0{width}x},{len(code)},{code}"
            for symbol, code in sorted(self.codes.items(), key=lambda item: (len(item[1]), item[0]))
        )

    def average_length(self, frequencies: Counter) -> float:
        total = sum(frequencies.values())
        return sum(freq * self.lengths[s] for s, freq in frequencies.items()) / total


def entropy(frequencies: Counter) -> float:
    total = sum(frequencies.values())
    return -sum(f / total * math.log2(f / total) for f in frequencies.values() if f)


def _code_lengths(frequencies: Counter) -> dict[int, int]:
    """
    Minimum-variance Huffman: among equal weights the node created earliest
    is merged first, leaves being older than every internal node.
    """
    if len(frequencies) == 1:
        return {next(iter(frequencies)): 1}

    order = itertools.count()
    heap = [(weight, next(order), symbol) for symbol, weight in sorted(frequencies.items())]
    heapq.heapify(heap)
    while len(heap) > 1:
        w1, _, left = heapq.heappop(heap)
        w2, _, right = heapq.heappop(heap)
        heapq.heappush(heap, (w1 + w2, next(order), (left, right)))

    lengths = {}
    stack = [(heap[0][2], 0)]
    while stack:
        node, depth = stack.pop()
        if isinstance(node, tuple):
            stack.append((node[0], depth + 1))
            stack.append((node[1], depth + 1))
        else:
            lengths[node] = depth
    return lengths


def build_codebook(data: str, k: int) -> Codebook:
    """
    Builds a minimum-variance Huffman codebook over the k-bit symbols of data.

    Raises:
        DomainError: If data is empty or k is outside [1, 32].
    """
    if not 1 <= k <= 32:
        raise DomainError(f"symbol width k must lie in [1, 32], got {k}")
    if not data:
        raise DomainError("cannot build a codebook from empty data")
    return Codebook(k, _code_lengths(Counter(split_symbols(data, k))))


def compress(data: str, book: Codebook) -> str:
    codes = book.codes
    try:
        return "".join(codes[symbol] for symbol in split_symbols(data, book.k))
    except KeyError as error:
        raise DomainError(f"symbol {error.args[0]:#x} has no code") from error


def decompress(bits: str, book: Codebook, original_bit_length: int) -> str:
    """
    Raises:
        CorruptArchiveError: If bits end inside a code or decode to a length
            inconsistent with original_bit_length.
    """
    lookup = book._decode
    longest = max(book.lengths.values())
    symbols = []
    start = 0
    for end in range(1, len(bits) + 1):
        symbol = lookup.get(bits[start:end])
        if symbol is not None:
            symbols.append(symbol)
            start = end
        elif end - start >= longest:
            raise CorruptArchiveError(f"no code matches the bits at offset {start}")
    if start != len(bits):
        raise CorruptArchiveError(f"dangling {len(bits) - start} bits after the last code")

    output = "".join(int_to_bits(symbol, book.k) for symbol in symbols)
    if not 0 <= len(output) - original_bit_length < max(book.k, 1) and original_bit_length:
        raise CorruptArchiveError(
            f"decoded {len(output)} bits, expected {original_bit_length}"
        )
    if original_bit_length == 0 and output:
        raise CorruptArchiveError(f"decoded {len(output)} bits, expected none")
    return output[:original_bit_length]


def compression_rate(original_bit_length: int, compressed_bit_length: int) -> float:
    return original_bit_length / compressed_bit_length
