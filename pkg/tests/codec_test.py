import dataclasses
from fractions import Fraction

import numpy as np
import pytest

from dna_codec import codec, corpus
from dna_codec.analysis import iteration_histogram
from dna_codec.codec import (CodecParams, EncodeLog, EncodedArchive, decode,
                             encode, encode_chunk, prefix_for, r_from_prefix,
                             run_prefix_safety_check)
from dna_codec.constants import BASES, GcScope, MappingMethod
from dna_codec.exceptions import (CorruptArchiveError, DecodeError,
                                  DomainError, EncodingFailedError)
from dna_codec.mapper import Block11Mapper
from dna_codec.mapping import (MappingTable, SubstitutionMatrix,
                               build_canonical_table, identity_table)
from dna_codec.sequence import ConstraintSet, DnaSequence, verify
from dna_codec.utils import bytes_to_bits


def test_params_validation():
    with pytest.raises(DomainError):
        CodecParams(method=MappingMethod.BLOCK11, n=200)
    with pytest.raises(DomainError):
        CodecParams(max_iterations=5)
    with pytest.raises(DomainError):
        CodecParams(max_iterations=0)
    with pytest.raises(DomainError):
        CodecParams(method=MappingMethod.WHOLE_STREAM, n=199)
    with pytest.raises(DomainError):
        CodecParams(m=4, constraints=ConstraintSet(max_run=4))
    with pytest.raises(DomainError):
        CodecParams(m=3, constraints=ConstraintSet(max_run=4))
    with pytest.raises(DomainError):
        CodecParams(k=33)
    assert CodecParams(method="whole_stream", m=4, constraints=ConstraintSet(max_run=4), n=200).n == 200


def test_prefix_mapping():
    assert [prefix_for(r) for r in range(4)] == list("ACGT")
    assert prefix_for(2) == "G"
    assert r_from_prefix("t") == 3
    with pytest.raises(DecodeError):
        r_from_prefix("N")
    with pytest.raises(DomainError):
        prefix_for(4)


@pytest.mark.usefixtures("canonical_table_fixture", "bit_source_fixture")
def test_encode_chunk(canonical_table_fixture, bit_source_fixture):
    mapper = Block11Mapper(canonical_table_fixture)
    constraints = ConstraintSet(alpha=Fraction(1, 10))
    strand, r = encode_chunk(bit_source_fixture(363), mapper, 198, constraints)
    assert len(strand) == 199
    assert strand.bases[0] == BASES[r]
    assert verify(strand, (1, 199), constraints)


@pytest.mark.usefixtures("canonical_table_fixture")
def test_encode_chunk_gives_up(canonical_table_fixture):
    mapper = Block11Mapper(canonical_table_fixture)
    impossible = ConstraintSet(forbidden_patterns=tuple(BASES))
    assert encode_chunk("0" * 363, mapper, 198, impossible) is None


@pytest.mark.usefixtures("block11_params_fixture", "whole_stream_params_fixture", "bit_source_fixture")
def test_round_trip(block11_params_fixture, whole_stream_params_fixture, bit_source_fixture):
    lengths = [1, 2, 8, 11, 12, 100, 362, 363, 364, 367, 368, 369, 1000, 2500]
    for base_params in (block11_params_fixture, whole_stream_params_fixture):
        for k in (None, 8, 16):
            params = dataclasses.replace(base_params, k=k)
            for length in lengths:
                data = bit_source_fixture(length)
                archive = encode(data, params)
                assert decode(archive) == data, (params.method, k, length)
                assert archive.verify_all() == []


@pytest.mark.usefixtures("block11_params_fixture", "whole_stream_params_fixture", "bit_source_fixture")
def test_round_trip_many_inputs(block11_params_fixture, whole_stream_params_fixture, bit_source_fixture):
    rng = np.random.default_rng(5)
    for trial in range(1000):
        params = block11_params_fixture if trial % 2 else whole_stream_params_fixture
        if trial % 3 == 0:
            params = dataclasses.replace(params, k=int(rng.integers(1, 17)))
        data = bit_source_fixture(int(rng.integers(1, 1500)))
        assert decode(encode(data, params)) == data


@pytest.mark.usefixtures("relaxed_constraints_fixture", "bit_source_fixture")
@pytest.mark.slow
@pytest.mark.parametrize("method", list(MappingMethod))
@pytest.mark.parametrize("k", [None, 16])
def test_round_trip_one_mebibyte(relaxed_constraints_fixture, bit_source_fixture, method, k):
    data = bit_source_fixture(8 * 2 ** 20)
    params = CodecParams(method=method, constraints=relaxed_constraints_fixture, k=k)
    archive = encode(data, params)
    assert archive.verify_all() == []
    assert decode(archive) == data


@pytest.mark.usefixtures("block11_params_fixture", "bit_source_fixture")
def test_strand_layout(block11_params_fixture, bit_source_fixture):
    log = EncodeLog()
    archive = encode(bit_source_fixture(363 * 3 + 20), block11_params_fixture, log=log)
    lengths = [len(s) for s in archive.strands]
    assert lengths[:3] == [199, 199, 199]
    assert lengths[3] in (13, 199)
    assert len(log.iterations) == 4
    assert archive.r_values == [i - 1 for i in log.iterations]


@pytest.mark.usefixtures("block11_params_fixture", "bit_source_fixture")
def test_padded_tail(block11_params_fixture, bit_source_fixture):
    params = dataclasses.replace(block11_params_fixture, trim_tail=False)
    data = bit_source_fixture(400)
    archive = encode(data, params)
    assert [len(s) for s in archive.strands] == [199, 199]
    assert decode(archive) == data


@pytest.mark.usefixtures("block11_params_fixture", "bit_source_fixture")
def test_failed_tail_falls_back_to_full_length(block11_params_fixture, bit_source_fixture, monkeypatch):
    real_encode_chunk = codec.encode_chunk

    def full_length_only(bits, mapper, payload_nt, *args, **kwargs):
        if payload_nt < block11_params_fixture.n:
            return None
        return real_encode_chunk(bits, mapper, payload_nt, *args, **kwargs)

    monkeypatch.setattr(codec, "encode_chunk", full_length_only)
    data = bit_source_fixture(400)
    log = EncodeLog()
    archive = encode(data, block11_params_fixture, log=log)
    assert log.padded_tails == [1]
    assert [len(s) for s in archive.strands] == [199, 199]
    assert decode(archive) == data


@pytest.mark.usefixtures("block11_params_fixture", "bit_source_fixture")
def test_block11_density_without_source_coding(block11_params_fixture, bit_source_fixture):
    archive = encode(bit_source_fixture(363 * 5), block11_params_fixture)
    assert Fraction(archive.header.original_bit_length, archive.total_nt) == Fraction(11, 6) * Fraction(198, 199)


@pytest.mark.usefixtures("poem_bits_fixture")
def test_poem_densities(poem_bits_fixture):
    expected_nt = {MappingMethod.WHOLE_STREAM: 878, MappingMethod.BLOCK11: 893}
    reference = {MappingMethod.WHOLE_STREAM: 4.48, MappingMethod.BLOCK11: 4.39}
    for method, total_nt in expected_nt.items():
        log = EncodeLog()
        archive = encode(poem_bits_fixture, CodecParams(method=method, k=16), log=log)
        assert archive.header.compressed_bit_length == 1619
        assert archive.total_nt == total_nt
        assert archive.density == pytest.approx(reference[method], rel=0.05)
        assert archive.verify_all() == []
        assert decode(archive) == poem_bits_fixture


@pytest.mark.usefixtures("block11_params_fixture", "bit_source_fixture")
def test_encode_is_deterministic(block11_params_fixture, bit_source_fixture):
    data = bit_source_fixture(2000)
    assert encode(data, block11_params_fixture) == encode(data, block11_params_fixture)


@pytest.mark.usefixtures("bit_source_fixture")
def test_constraint_options(bit_source_fixture):
    constraints = ConstraintSet(
        alpha=Fraction(1, 10), forbidden_patterns=("ACGTACGT",), gc_scope=GcScope.FULL_STRAND
    )
    archive = encode(bit_source_fixture(3000), CodecParams(constraints=constraints))
    assert archive.verify_all() == []
    assert not any("ACGTACGT" in s.bases for s in archive.strands)


def test_encoding_failure():
    params = CodecParams(constraints=ConstraintSet(forbidden_patterns=tuple(BASES)))
    with pytest.raises(EncodingFailedError) as error:
        encode("1" * 500, params)
    assert error.value.chunk_index == 0


def test_encode_domain():
    with pytest.raises(DomainError):
        encode("", CodecParams())
    with pytest.raises(DomainError):
        encode("0120", CodecParams())
    with pytest.raises(DomainError):
        encode("0101", CodecParams(), table=identity_table(2))


@pytest.mark.usefixtures("block11_params_fixture", "bit_source_fixture")
def test_decode_reports_strand_index(block11_params_fixture, bit_source_fixture):
    archive = encode(bit_source_fixture(363 * 3), block11_params_fixture)
    broken = list(archive.strands)
    broken[1] = DnaSequence(broken[1].bases[0] + "AAA" + broken[1].bases[4:])
    with pytest.raises(DecodeError) as error:
        decode(EncodedArchive(archive.header, tuple(broken)))
    assert error.value.strand_index == 1
    assert str(error.value).startswith("strand 1:")


@pytest.mark.usefixtures("block11_params_fixture", "bit_source_fixture")
def test_decode_rejects_tampered_header(block11_params_fixture, bit_source_fixture):
    archive = encode(bit_source_fixture(363 * 3), block11_params_fixture)
    header = archive.header
    for tampered in (
        dataclasses.replace(header, original_bit_length=header.original_bit_length + 1000),
        dataclasses.replace(header, compressed_bit_length=header.compressed_bit_length + 1000,
                            original_bit_length=header.original_bit_length + 1000),
        dataclasses.replace(header, n=204),
    ):
        with pytest.raises(CorruptArchiveError):
            decode(EncodedArchive(tampered, archive.strands))


@pytest.mark.usefixtures("block11_params_fixture", "bit_source_fixture")
def test_decode_rejects_large_prefix(block11_params_fixture, bit_source_fixture):
    params = dataclasses.replace(block11_params_fixture, max_iterations=2)
    archive = encode(bit_source_fixture(100), params)
    strand = archive.strands[0]
    with pytest.raises(DecodeError):
        decode(EncodedArchive(archive.header, (DnaSequence("T" + strand.bases[1:]),)))


@pytest.mark.usefixtures("block11_params_fixture", "bit_source_fixture")
def test_substitution_stays_in_one_block(block11_params_fixture, bit_source_fixture):
    data = bit_source_fixture(363 * 2)
    archive = encode(data, block11_params_fixture)
    altered = []
    for index, strand in enumerate(archive.strands):
        for position in range(1, len(strand)):
            for base in BASES:
                if base == strand.bases[position]:
                    continue
                strands = list(archive.strands)
                strands[index] = DnaSequence(strand.bases[:position] + base + strand.bases[position + 1:])
                try:
                    output = decode(EncodedArchive(archive.header, tuple(strands)))
                except DecodeError as error:
                    assert error.strand_index == index
                    continue
                diff = [i for i, (a, b) in enumerate(zip(data, output)) if a != b]
                block = (index * 363 + (position - 1) // 6 * 11)
                assert all(block <= i < block + 11 for i in diff)
                altered.append(len(diff))
    assert altered
    assert max(altered) <= 11
    assert abs(sum(altered) / len(altered) - 3.0) < 0.25


@pytest.mark.usefixtures("canonical_table_fixture")
def test_block_substitution_statistics(canonical_table_fixture):
    mapper = Block11Mapper(canonical_table_fixture)
    altered = []
    for value in range(2048):
        bits = format(value, "011b")
        block = mapper.map(bits, 6)
        for position in range(6):
            for base in BASES:
                if base == block[position]:
                    continue
                try:
                    output = mapper.unmap(block[:position] + base + block[position + 1:])
                except DecodeError:
                    continue
                altered.append(sum(a != b for a, b in zip(bits, output)))
    assert max(altered) <= 11
    assert sum(altered) / len(altered) == pytest.approx(3.026, abs=0.001)


@pytest.mark.usefixtures("canonical_table_fixture")
def test_block_substitution_statistics_weighted(canonical_table_fixture):
    """Each substitution weighted by how often sequencing produces it."""
    mapper = Block11Mapper(canonical_table_fixture)
    matrix = SubstitutionMatrix.builtin()
    total_weight = 0.0
    weighted = 0.0
    for value in range(2048):
        bits = format(value, "011b")
        block = mapper.map(bits, 6)
        for position in range(6):
            for base in BASES:
                if base == block[position]:
                    continue
                try:
                    output = mapper.unmap(block[:position] + base + block[position + 1:])
                except DecodeError:
                    continue
                weight = float(matrix.prob(block[position], base))
                total_weight += weight
                weighted += weight * sum(a != b for a, b in zip(bits, output))
    assert abs(weighted / total_weight - 3.0) < 0.05


def test_prefix_safety_check():
    canonical = build_canonical_table()
    assert run_prefix_safety_check(canonical, 3)
    assert run_prefix_safety_check(identity_table(2), 2)
    tuples = list(canonical.tuples)
    tuples[0] = "AAA"
    assert not run_prefix_safety_check(MappingTable(3, tuples), 3)


def test_default_table():
    assert codec.default_table(3) == build_canonical_table()
    assert codec.default_table(4).size == 192


@pytest.mark.parametrize("method", list(MappingMethod))
def test_image_round_trip(method):
    data = bytes_to_bits(corpus.generate_image(256, 256))
    log = EncodeLog()
    archive = encode(data, CodecParams(method=method), log=log)
    assert decode(archive) == data
    assert archive.verify_all() == []
    assert archive.density >= 1.80

    histogram = iteration_histogram(log)
    assert histogram.failures == 0
    assert histogram.first_pass_rate() >= 0.8
    assert list(histogram.counts) == sorted(histogram.counts, reverse=True)
