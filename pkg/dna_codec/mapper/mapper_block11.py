from dna_codec.constants import BLOCK_BITS, BLOCK_NT, BLOCK_VALUES, MappingMethod
from dna_codec.exceptions import DecodeError, DomainError, SymbolRangeError
from dna_codec.mapper.mapper import Mapper
from dna_codec.mapper.mapper_registry import MapperRegistry
from dna_codec.mapping import MappingTable, decode_symbol
from dna_codec.sequence import DnaSequence
from dna_codec.utils import int_to_bits


def _block_to_nt(value: int, tuples) -> str:
    high, low = divmod(value, 48)
    return tuples[high] + tuples[low]


def _nt_to_block(block: str, table: MappingTable) -> int:
    high = decode_symbol(table, block[:3])
    low = decode_symbol(table, block[3:])
    value = high * 48 + low
    if value >= BLOCK_VALUES:
        raise SymbolRangeError(f"block {block} decodes to {value} >= {BLOCK_VALUES}", tuple_=block)
    return value


def _check_table(table: MappingTable) -> None:
    if table.m != 3 or table.size != 48:
        raise DomainError("block11 mapping needs a 48-ary table for m=3")


def map_block11(bits: str, table: MappingTable) -> DnaSequence:
    """
    Maps 11 bits to two 48-ary digits (v div 48, v mod 48) and then to 6 nt.

    Raises:
        DomainError: If bits is not exactly 11 bits long.
    """
    _check_table(table)
    if len(bits) != BLOCK_BITS:
        raise DomainError(f"block11 needs exactly {BLOCK_BITS} bits, got {len(bits)}")
    return DnaSequence(_block_to_nt(int(bits, 2), table.tuples))


def unmap_block11(seq, table: MappingTable) -> str:
    """
    Raises:
        DecodeError: If either triple is not a table tuple.
        SymbolRangeError: If the digits encode a value of 2048 or more.
    """
    _check_table(table)
    block = str(seq).upper()
    if len(block) != BLOCK_NT:
        raise DecodeError(f"block11 needs exactly {BLOCK_NT} nt, got {len(block)}")
    return int_to_bits(_nt_to_block(block, table), BLOCK_BITS)


class Block11Mapper(Mapper):
    def __init__(self, table: MappingTable):
        _check_table(table)
        super().__init__(MappingMethod.BLOCK11, table, BLOCK_NT)

    def capacity_bits(self, payload_nt: int) -> int:
        self.check_payload_nt(payload_nt)
        return payload_nt // BLOCK_NT * BLOCK_BITS

    def payload_nt_for(self, bit_count: int) -> int:
        return max(1, -(-bit_count // BLOCK_BITS)) * BLOCK_NT

    def map(self, bits: str, payload_nt: int) -> str:
        if len(bits) != self.capacity_bits(payload_nt):
            raise DomainError(f"{len(bits)} bits do not fill a {payload_nt} nt payload")
        tuples = self.table.tuples
        return "".join(
            _block_to_nt(int(bits[i:i + BLOCK_BITS], 2), tuples)
            for i in range(0, len(bits), BLOCK_BITS)
        )

    def unmap(self, payload: str) -> str:
        self.check_payload_nt(len(payload))
        return "".join(
            int_to_bits(_nt_to_block(payload[i:i + BLOCK_NT], self.table), BLOCK_BITS)
            for i in range(0, len(payload), BLOCK_NT)
        )


# Register the Block11Mapper class in the registry
MapperRegistry.register_mapper(MappingMethod.BLOCK11, Block11Mapper)
