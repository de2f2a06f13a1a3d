from dna_codec.constants import MappingMethod
from dna_codec.exceptions import CapacityError, CorruptArchiveError, DecodeError, DomainError
from dna_codec.mapper.mapper import Mapper
from dna_codec.mapper.mapper_registry import MapperRegistry
from dna_codec.mapping import MappingTable, decode_symbol
from dna_codec.sequence import DnaSequence
from dna_codec.utils import int_to_bits


def symbol_capacity_bits(alphabet: int, symbol_count: int) -> int:
    """Largest B such that every B-bit value fits into symbol_count base-alphabet digits."""
    return (alphabet ** symbol_count).bit_length() - 1


def _to_digits(value: int, base: int, count: int) -> list[int]:
    digits = [0] * count
    for position in range(count - 1, -1, -1):
        value, digits[position] = divmod(value, base)
    return digits


def _encode_value(value: int, table: MappingTable, symbol_count: int) -> str:
    if value >= table.size ** symbol_count:
        raise CapacityError(f"value needs more than {symbol_count} base-{table.size} digits")
    tuples = table.tuples
    return "".join(tuples[d] for d in _to_digits(value, table.size, symbol_count))


def _decode_value(payload: str, table: MappingTable) -> int:
    m = table.m
    if len(payload) % m:
        raise DecodeError(f"payload length {len(payload)} is not a multiple of {m}")
    value = 0
    for i in range(0, len(payload), m):
        value = value * table.size + decode_symbol(table, payload[i:i + m])
    return value


def map_whole_stream(bits: str, table: MappingTable, symbol_count: int) -> DnaSequence:
    """
    Reads bits as one unsigned integer (MSB first) and writes it as exactly
    symbol_count M-ary digits, most significant first.

    Raises:
        CapacityError: If the value needs more than symbol_count digits.
    """
    if symbol_count <= 0:
        raise DomainError(f"symbol_count must be positive, got {symbol_count}")
    value = int(bits, 2) if bits else 0
    return DnaSequence(_encode_value(value, table, symbol_count))


def unmap_whole_stream(seq, table: MappingTable, original_bit_length: int) -> str:
    """
    Raises:
        DecodeError: If a tuple is not in the table.
        CorruptArchiveError: If the value does not fit in original_bit_length bits.
    """
    value = _decode_value(str(seq).upper(), table)
    if value >> original_bit_length:
        raise CorruptArchiveError(f"decoded value overflows {original_bit_length} bits")
    return int_to_bits(value, original_bit_length)


class WholeStreamMapper(Mapper):
    def __init__(self, table: MappingTable):
        super().__init__(MappingMethod.WHOLE_STREAM, table, table.m)

    def capacity_bits(self, payload_nt: int) -> int:
        self.check_payload_nt(payload_nt)
        return symbol_capacity_bits(self.table.size, payload_nt // self.table.m)

    def payload_nt_for(self, bit_count: int) -> int:
        symbols = 1
        while symbol_capacity_bits(self.table.size, symbols) < bit_count:
            symbols += 1
        return symbols * self.table.m

    def map(self, bits: str, payload_nt: int) -> str:
        if len(bits) != self.capacity_bits(payload_nt):
            raise DomainError(f"{len(bits)} bits do not fill a {payload_nt} nt payload")
        return _encode_value(int(bits, 2) if bits else 0, self.table, payload_nt // self.table.m)

    def unmap(self, payload: str) -> str:
        bit_count = self.capacity_bits(len(payload))
        value = _decode_value(payload, self.table)
        if value >> bit_count:
            raise CorruptArchiveError(f"decoded value overflows {bit_count} bits")
        return int_to_bits(value, bit_count)


# Register the WholeStreamMapper class in the registry
MapperRegistry.register_mapper(MappingMethod.WHOLE_STREAM, WholeStreamMapper)
