from abc import ABC, abstractmethod

from dna_codec.constants import MappingMethod
from dna_codec.exceptions import DomainError
from dna_codec.mapper.mapper_registry import MapperRegistry
from dna_codec.mapping import MappingTable


class Mapper(ABC):
    """
    Converts randomized chunk bits into an nt payload and back.

    Args:
        method (MappingMethod): The method this mapper implements.
        table (MappingTable): Symbol to tuple table used for every digit.
        unit_nt (int): Payload lengths must be a multiple of this.
    """

    def __init__(self, method: MappingMethod, table: MappingTable, unit_nt: int):
        self.method = method
        self.table = table
        self.unit_nt = unit_nt

    @staticmethod
    def create_mapper(method: MappingMethod, table: MappingTable) -> "Mapper":
        return MapperRegistry.create_mapper(method, table)

    def check_payload_nt(self, payload_nt: int) -> None:
        if payload_nt <= 0 or payload_nt % self.unit_nt:
            raise DomainError(
                f"{self.method.value} payloads must be a positive multiple of {self.unit_nt} nt, got {payload_nt}"
            )

    @abstractmethod
    def capacity_bits(self, payload_nt: int) -> int:
        """Number of chunk bits carried by a payload of payload_nt nucleotides."""

    @abstractmethod
    def payload_nt_for(self, bit_count: int) -> int:
        """Shortest payload length whose capacity covers bit_count bits."""

    @abstractmethod
    def map(self, bits: str, payload_nt: int) -> str:
        """Maps exactly capacity_bits(payload_nt) bits to a payload."""

    @abstractmethod
    def unmap(self, payload: str) -> str:
        """Inverse of map; returns capacity_bits(len(payload)) bits."""
