from collections import Counter

import pytest

from dna_codec.exceptions import CorruptArchiveError, DomainError
from dna_codec.huffman import (Codebook, build_codebook, compress,
                               compression_rate, decompress, entropy,
                               split_symbols)
from dna_codec.utils import int_to_bits


def _symbols(k, weights):
    return "".join(int_to_bits(symbol, k) * count for symbol, count in weights.items())


def test_single_symbol_gets_one_bit():
    book = build_codebook("0" * 32, 16)
    assert book.lengths == {0: 1}
    assert compress("0" * 32, book) == "00"


def test_two_equiprobable_symbols():
    book = build_codebook("0001", 2)
    assert book.lengths == {0: 1, 1: 1}


def test_uniform_symbols_balanced_tree():
    book = build_codebook("00011011", 2)
    assert set(book.lengths.values()) == {2}


def test_minimum_variance_lengths():
    book = build_codebook(_symbols(3, {0: 4, 1: 2, 2: 2, 3: 1, 4: 1}), 3)
    assert book.lengths == {0: 2, 1: 2, 2: 2, 3: 3, 4: 3}


def test_canonical_codes():
    book = Codebook(3, {0: 2, 1: 2, 2: 2, 3: 3, 4: 3})
    assert book.codes == {0: "00", 1: "01", 2: "10", 3: "110", 4: "111"}
    assert book.dump().splitlines()[0] == "0,2,00"


@pytest.mark.usefixtures("bit_source_fixture")
def test_prefix_free_and_kraft(bit_source_fixture):
    for k in (2, 5, 8):
        data = bit_source_fixture(4000)
        book = build_codebook(data, k)
        codes = list(book.codes.values())
        assert book.kraft_sum() <= 1
        assert not any(a != b and b.startswith(a) for a in codes for b in codes)
        frequencies = Counter(split_symbols(data, k))
        assert book.average_length(frequencies) <= entropy(frequencies) + 1


@pytest.mark.usefixtures("bit_source_fixture")
def test_round_trip(bit_source_fixture):
    for length in (1, 7, 16, 17, 250, 1001):
        for k in (1, 4, 8, 16):
            data = bit_source_fixture(length)
            book = build_codebook(data, k)
            assert decompress(compress(data, book), book, length) == data


@pytest.mark.usefixtures("poem_bits_fixture")
def test_poem_compression(poem_bits_fixture):
    assert len(poem_bits_fixture) == 3920
    book = build_codebook(poem_bits_fixture, 16)
    compressed = compress(poem_bits_fixture, book)
    assert abs(len(compressed) - 1618) <= 0.05 * 1618
    assert len(compressed) == 1619
    assert compression_rate(3920, len(compressed)) == pytest.approx(2.4227, rel=0.05)


def test_truncated_stream():
    data = _symbols(3, {0: 4, 1: 2, 2: 2, 3: 1, 4: 1})
    book = build_codebook(data, 3)
    with pytest.raises(CorruptArchiveError):
        decompress(compress(data, book)[:-1], book, len(data))


def test_length_mismatch():
    data = "0110" * 8
    book = build_codebook(data, 4)
    with pytest.raises(CorruptArchiveError):
        decompress(compress(data, book), book, len(data) + 64)


def test_empty_payload():
    book = build_codebook("0101", 2)
    assert decompress("", book, 0) == ""


def test_missing_symbol():
    book = build_codebook("0000", 2)
    with pytest.raises(DomainError):
        compress("11", book)


def test_codebook_serialization():
    book = build_codebook(_symbols(16, {0xBEEF: 3, 0x0001: 1, 0xFFFF: 5}), 16)
    assert Codebook.from_bytes(book.to_bytes()) == book
    with pytest.raises(CorruptArchiveError):
        Codebook.from_bytes(book.to_bytes()[:-1])


def test_build_codebook_domain():
    with pytest.raises(DomainError):
        build_codebook("", 16)
    with pytest.raises(DomainError):
        build_codebook("0101", 0)
    with pytest.raises(DomainError):
        Codebook(2, {0: 1, 1: 1, 2: 1})
