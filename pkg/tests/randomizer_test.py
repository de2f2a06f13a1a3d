import hashlib

import pytest

from dna_codec.exceptions import DomainError
from dna_codec.randomizer import Randomizer, randomize
from dna_codec.utils import bytes_to_bits, hamming_distance


def test_h_is_sha3_of_decimal_r():
    rng = Randomizer()
    assert rng.output_bits == 512
    assert rng.h(0) == bytes_to_bits(hashlib.sha3_512(b"00000000").digest())
    assert rng.h(7) == rng.h(7)
    assert rng.h(0) != rng.h(1)


def test_keystream_repeats_h():
    rng = Randomizer()
    stream = rng.keystream(3, 1300)
    assert len(stream) == 1300
    assert stream[:512] == stream[512:1024] == rng.h(3)
    assert stream[1024:] == rng.h(3)[:276]


@pytest.mark.usefixtures("bit_source_fixture")
def test_randomize_is_an_involution(bit_source_fixture):
    for length in (1, 11, 363, 1000):
        bits = bit_source_fixture(length)
        for r in range(4):
            assert randomize(randomize(bits, r), r) == bits


def test_randomize_zeros_gives_h():
    assert randomize("0" * 512, 2) == Randomizer().h(2)


@pytest.mark.usefixtures("bit_source_fixture")
def test_different_r_flip_about_half(bit_source_fixture):
    bits = bit_source_fixture(4096)
    distance = hamming_distance(randomize(bits, 0), randomize(bits, 1))
    # 4096 bits: mean 2048, four standard deviations is 128.
    assert abs(distance - 2048) <= 128


def test_randomizer_validation():
    with pytest.raises(DomainError):
        Randomizer("no-such-hash")
    with pytest.raises(DomainError):
        Randomizer("shake_256")
    with pytest.raises(DomainError):
        Randomizer().h(-1)
    assert Randomizer("sha256").output_bits == 256


def test_randomizer_accepts_standard_hash_names():
    assert Randomizer("SHA3-512").hash_name == "sha3_512"
    assert Randomizer("SHA3-512").h(0) == Randomizer().h(0)
    assert Randomizer("SHA-256").hash_name == "sha256"
