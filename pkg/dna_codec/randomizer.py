import hashlib
from dataclasses import dataclass
from functools import lru_cache

from dna_codec.constants import RANDOMIZER_HASH
from dna_codec.exceptions import DomainError
from dna_codec.utils import bytes_to_bits, xor_bits


def _hashlib_name(name: str) -> str:
    """Maps spellings such as SHA3-512 or SHA-256 onto hashlib names."""
    lowered = name.lower()
    for candidate in (lowered, lowered.replace("-", "_"), lowered.replace("-", "")):
        if candidate in hashlib.algorithms_available:
            return candidate
    raise DomainError(f"Unknown hash function {name}")


@lru_cache(maxsize=256)
def _hash_bits(hash_name: str, r: int) -> str:
    digest = hashlib.new(hash_name, f"{r:08d}".encode("ascii")).digest()
    return bytes_to_bits(digest)


@dataclass(frozen=True)
class Randomizer:
    """
    Keystream source h(r): the hash of r written as eight ASCII decimal
    digits, repeated cyclically to the length of the data.
    """

    hash_name: str = RANDOMIZER_HASH

    def __post_init__(self):
        object.__setattr__(self, "hash_name", _hashlib_name(self.hash_name))
        if hashlib.new(self.hash_name).digest_size == 0:
            raise DomainError(f"{self.hash_name} needs an explicit output length")

    @property
    def output_bits(self) -> int:
        return hashlib.new(self.hash_name).digest_size * 8

    def h(self, r: int) -> str:
        if r < 0:
            raise DomainError(f"r must be non-negative, got {r}")
        return _hash_bits(self.hash_name, r)

    def keystream(self, r: int, length: int) -> str:
        block = self.h(r)
        repeats = -(-length // len(block))
        return (block * repeats)[:length]


def randomize(bits: str, r: int, rng: "Randomizer | None" = None) -> str:
    """XORs the bits with h(r); applying it twice with the same r is the identity."""
    rng = rng or Randomizer()
    return xor_bits(bits, rng.keystream(r, len(bits)))
