import pytest

from dna_codec.constants import MappingMethod
from dna_codec.exceptions import (CapacityError, CorruptArchiveError,
                                  DecodeError, DomainError, SymbolRangeError)
from dna_codec.mapper import (Block11Mapper, Mapper, WholeStreamMapper,
                              map_block11, map_whole_stream,
                              symbol_capacity_bits, unmap_block11,
                              unmap_whole_stream)
from dna_codec.mapping import identity_table
from dna_codec.utils import int_to_bits


@pytest.mark.usefixtures("canonical_table_fixture")
def test_map_block11(canonical_table_fixture):
    table = canonical_table_fixture
    assert str(map_block11(int_to_bits(0, 11), table)) == "AACAAC"
    assert str(map_block11(int_to_bits(2047, 11), table)) == "ATGCCG"
    assert str(map_block11(int_to_bits(49, 11), table)) == "AATAAT"


@pytest.mark.usefixtures("canonical_table_fixture")
def test_unmap_block11(canonical_table_fixture):
    table = canonical_table_fixture
    assert unmap_block11("AACAAC", table) == "0" * 11
    assert int(unmap_block11("ATGCCG", table), 2) == 2047
    assert all(
        int(unmap_block11(map_block11(int_to_bits(v, 11), table), table), 2) == v
        for v in range(2048)
    )


@pytest.mark.usefixtures("canonical_table_fixture")
def test_block11_errors(canonical_table_fixture):
    table = canonical_table_fixture
    with pytest.raises(SymbolRangeError):
        unmap_block11("TTGAAC", table)
    with pytest.raises(DecodeError):
        unmap_block11("AAAAAC", table)
    with pytest.raises(DomainError):
        map_block11("0" * 10, table)
    with pytest.raises(DomainError):
        map_block11("0" * 11, identity_table(2))


@pytest.mark.usefixtures("canonical_table_fixture")
def test_map_whole_stream(canonical_table_fixture):
    table = canonical_table_fixture
    assert str(map_whole_stream("0" * 9, table, 2)) == "AACAAC"
    assert str(map_whole_stream(int_to_bits(48, 11), table, 2)) == "AATAAC"
    assert str(map_whole_stream(int_to_bits(5, 3), table, 1)) == "AGT"


@pytest.mark.usefixtures("canonical_table_fixture")
def test_map_whole_stream_capacity(canonical_table_fixture):
    with pytest.raises(CapacityError):
        map_whole_stream(int_to_bits(48, 6), canonical_table_fixture, 1)


@pytest.mark.usefixtures("canonical_table_fixture")
def test_unmap_whole_stream(canonical_table_fixture):
    table = canonical_table_fixture
    assert unmap_whole_stream("AATAAC", table, 11) == int_to_bits(48, 11)
    with pytest.raises(DecodeError):
        unmap_whole_stream("AAAAAA", table, 11)
    with pytest.raises(CorruptArchiveError):
        unmap_whole_stream("CGACGA", table, 11)


def test_symbol_capacity_bits():
    assert symbol_capacity_bits(48, 1) == 5
    assert symbol_capacity_bits(48, 66) == 368
    assert symbol_capacity_bits(2, 7) == 7


@pytest.mark.usefixtures("canonical_table_fixture")
def test_registry_creates_mappers(canonical_table_fixture):
    assert isinstance(Mapper.create_mapper(MappingMethod.BLOCK11, canonical_table_fixture), Block11Mapper)
    assert isinstance(Mapper.create_mapper("whole_stream", canonical_table_fixture), WholeStreamMapper)
    with pytest.raises(ValueError):
        Mapper.create_mapper("arithmetic", canonical_table_fixture)


@pytest.mark.usefixtures("canonical_table_fixture")
def test_mapper_capacities(canonical_table_fixture):
    block11 = Block11Mapper(canonical_table_fixture)
    whole = WholeStreamMapper(canonical_table_fixture)
    assert block11.capacity_bits(198) == 363
    assert whole.capacity_bits(198) == 368
    assert block11.payload_nt_for(1) == 6
    assert block11.payload_nt_for(363) == 198
    assert whole.payload_nt_for(1) == 3
    assert whole.payload_nt_for(368) == 198
    with pytest.raises(DomainError):
        block11.capacity_bits(200)
    with pytest.raises(DomainError):
        whole.capacity_bits(100)


@pytest.mark.usefixtures("canonical_table_fixture", "bit_source_fixture")
def test_mapper_round_trip(canonical_table_fixture, bit_source_fixture):
    for mapper in (Block11Mapper(canonical_table_fixture), WholeStreamMapper(canonical_table_fixture)):
        for payload_nt in (6, 66, 198):
            bits = bit_source_fixture(mapper.capacity_bits(payload_nt))
            payload = mapper.map(bits, payload_nt)
            assert len(payload) == payload_nt
            assert mapper.unmap(payload) == bits


def test_whole_stream_mapper_other_m():
    mapper = WholeStreamMapper(identity_table(4))
    bits = "1" * mapper.capacity_bits(40)
    assert mapper.unmap(mapper.map(bits, 40)) == bits
